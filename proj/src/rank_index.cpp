#include "treid/rank_index.hpp"

#include <stdexcept>

namespace treid {

RankIndex::RankIndex(std::uint64_t priority_seed) : priority_rng_(priority_seed) {}

void RankIndex::pull(std::uint32_t n) {
  nodes_[n].size = 1 + subtree_size(nodes_[n].left) + subtree_size(nodes_[n].right);
}

std::uint32_t RankIndex::merge(std::uint32_t a, std::uint32_t b) {
  if (a == kNil) return b;
  if (b == kNil) return a;
  if (nodes_[a].priority >= nodes_[b].priority) {
    nodes_[a].right = merge(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = merge(a, nodes_[b].left);
  pull(b);
  return b;
}

void RankIndex::split(std::uint32_t t, const RankKey& key, std::uint32_t* lo,
                      std::uint32_t* hi) {
  if (t == kNil) {
    *lo = kNil;
    *hi = kNil;
    return;
  }
  if (nodes_[t].key < key) {
    split(nodes_[t].right, key, &nodes_[t].right, hi);
    pull(t);
    *lo = t;
  } else {
    split(nodes_[t].left, key, lo, &nodes_[t].left);
    pull(t);
    *hi = t;
  }
}

std::uint32_t RankIndex::make_node(RankKey key) {
  std::uint32_t idx;
  if (!free_slots_.empty()) {
    idx = free_slots_.back();
    free_slots_.pop_back();
    nodes_[idx] = Node{};
  } else {
    idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
  }
  nodes_[idx].key = key;
  nodes_[idx].priority = static_cast<std::uint32_t>(priority_rng_.next_u64() >> 32);
  return idx;
}

void RankIndex::insert(RankKey key) {
  const std::uint32_t n = make_node(key);
  std::uint32_t lo, hi;
  split(root_, key, &lo, &hi);
  root_ = merge(merge(lo, n), hi);
}

std::uint32_t RankIndex::erase_rec(std::uint32_t t, const RankKey& key, bool* found) {
  if (t == kNil) return kNil;
  Node& n = nodes_[t];
  if (key < n.key) {
    n.left = erase_rec(n.left, key, found);
  } else if (n.key < key) {
    n.right = erase_rec(n.right, key, found);
  } else {
    *found = true;
    free_slots_.push_back(t);
    return merge(n.left, n.right);
  }
  if (*found) pull(t);
  return t;
}

void RankIndex::erase(RankKey key) {
  bool found = false;
  root_ = erase_rec(root_, key, &found);
  if (!found) throw std::logic_error("RankIndex::erase: key not present");
}

int RankIndex::rank_of(RankKey key) const {
  std::uint32_t cur = root_;
  int rank = 1;
  while (cur != kNil) {
    const Node& n = nodes_[cur];
    if (key < n.key) {
      cur = n.left;
    } else if (n.key < key) {
      rank += static_cast<int>(subtree_size(n.left)) + 1;
      cur = n.right;
    } else {
      return rank + static_cast<int>(subtree_size(n.left));
    }
  }
  throw std::logic_error("RankIndex::rank_of: key not present");
}

bool RankIndex::contains(RankKey key) const {
  std::uint32_t cur = root_;
  while (cur != kNil) {
    const Node& n = nodes_[cur];
    if (key < n.key)
      cur = n.left;
    else if (n.key < key)
      cur = n.right;
    else
      return true;
  }
  return false;
}

std::size_t RankIndex::size() const { return subtree_size(root_); }

}  // namespace treid
