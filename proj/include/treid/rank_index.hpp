#pragma once

#include <cstdint>
#include <vector>

#include "treid/rng.hpp"

namespace treid {

// Total order over gallery candidates as seen by one probe: ascending score,
// then insertion ordinal. Ordinals are assigned in (arrival, track_id) replay
// order, so comparing (score, ordinal) is exactly the documented
// (score, arrival, track_id) order with earlier arrivals winning ties.
struct RankKey {
  double score = 0.0;
  std::uint32_t ordinal = 0;

  friend bool operator==(const RankKey&, const RankKey&) = default;
  friend bool operator<(const RankKey& a, const RankKey& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.ordinal < b.ordinal;
  }
};

// Order-statistic treap: insert, erase and rank query in expected O(log n).
// rank_of(key) = 1 + number of stored keys strictly less than key. Node
// priorities come from a fixed splitmix64 stream, so the tree shape (and
// therefore timing) replays identically across runs; query results never
// depend on shape at all. Nodes live in one vector and erased slots are
// recycled, keeping memory at one node per present key.
class RankIndex {
 public:
  explicit RankIndex(std::uint64_t priority_seed = 0x51AB5F2E9D3C47B1ULL);

  // Key must not already be present (ordinals make engine keys unique).
  void insert(RankKey key);

  // Throws std::logic_error if the key is absent.
  void erase(RankKey key);

  // 1-based rank of a present key; throws std::logic_error if absent.
  int rank_of(RankKey key) const;

  bool contains(RankKey key) const;
  std::size_t size() const;

  // Bytes held for nodes (capacity, not just live count); for memory accounting.
  std::size_t allocated_bytes() const { return nodes_.capacity() * sizeof(Node); }

  void reserve(std::size_t n) { nodes_.reserve(n); }

 private:
  static constexpr std::uint32_t kNil = 0xFFFFFFFFu;

  struct Node {
    RankKey key;
    std::uint32_t left = kNil;
    std::uint32_t right = kNil;
    std::uint32_t size = 1;
    std::uint32_t priority = 0;
  };

  std::uint32_t subtree_size(std::uint32_t n) const {
    return n == kNil ? 0 : nodes_[n].size;
  }
  void pull(std::uint32_t n);
  std::uint32_t merge(std::uint32_t a, std::uint32_t b);
  // Splits t into (< key, >= key).
  void split(std::uint32_t t, const RankKey& key, std::uint32_t* lo, std::uint32_t* hi);
  std::uint32_t erase_rec(std::uint32_t t, const RankKey& key, bool* found);
  std::uint32_t make_node(RankKey key);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_slots_;
  std::uint32_t root_ = kNil;
  SplitMix64 priority_rng_;
};

}  // namespace treid
