#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "treid/rank_index.hpp"
#include "treid/rng.hpp"

using namespace treid;

namespace {

// Sort-based oracle: rank = position in the fully sorted key list.
int sorted_rank(std::vector<RankKey> keys, RankKey key) {
  std::sort(keys.begin(), keys.end());
  const auto it = std::lower_bound(keys.begin(), keys.end(), key);
  REQUIRE(it != keys.end());
  REQUIRE(*it == key);
  return static_cast<int>(it - keys.begin()) + 1;
}

}  // namespace

TEST_CASE("single key has rank 1") {
  RankIndex index;
  index.insert({1.0, 0});
  CHECK(index.rank_of({1.0, 0}) == 1);
  CHECK(index.size() == 1);
}

TEST_CASE("score ties break by insertion ordinal") {
  RankIndex index;
  index.insert({1.0, 0});
  index.insert({2.0, 1});
  index.insert({2.0, 2});
  index.insert({3.0, 3});
  CHECK(index.rank_of({2.0, 1}) == 2);
  CHECK(index.rank_of({2.0, 2}) == 3);  // later arrival loses the tie
  CHECK(index.rank_of({3.0, 3}) == 4);
}

TEST_CASE("1000 random keys agree with the sorted-array oracle") {
  SplitMix64 rng(31);
  RankIndex index;
  std::vector<RankKey> keys;
  for (std::uint32_t i = 0; i < 1000; ++i) {
    // Coarse scores so duplicates actually occur.
    const double s = static_cast<double>(rng.next_below(200));
    keys.push_back({s, i});
    index.insert(keys.back());
  }
  REQUIRE(index.size() == 1000);
  for (const RankKey& key : keys) CHECK(index.rank_of(key) == sorted_rank(keys, key));
}

TEST_CASE("interleaved inserts and erases keep ranks consistent") {
  SplitMix64 rng(37);
  RankIndex index;
  std::vector<RankKey> present;
  std::uint32_t next_ordinal = 0;
  for (int step = 0; step < 3000; ++step) {
    const bool erase = !present.empty() && rng.next_below(3) == 0;
    if (erase) {
      const std::size_t victim = rng.next_below(present.size());
      index.erase(present[victim]);
      present.erase(present.begin() + static_cast<std::ptrdiff_t>(victim));
    } else {
      const RankKey key{static_cast<double>(rng.next_below(50)), next_ordinal++};
      index.insert(key);
      present.push_back(key);
    }
  }
  REQUIRE(index.size() == present.size());
  for (const RankKey& key : present)
    CHECK(index.rank_of(key) == sorted_rank(present, key));
}

TEST_CASE("absent keys are contract violations") {
  RankIndex index;
  index.insert({1.0, 0});
  CHECK_THROWS_AS(index.rank_of({2.0, 1}), std::logic_error);
  CHECK_THROWS_AS(index.erase({2.0, 1}), std::logic_error);
  // Same score, different ordinal is still a different key.
  CHECK_THROWS_AS(index.rank_of({1.0, 9}), std::logic_error);
}

TEST_CASE("contains distinguishes present keys") {
  RankIndex index;
  index.insert({4.0, 2});
  CHECK(index.contains({4.0, 2}));
  CHECK_FALSE(index.contains({4.0, 3}));
  index.erase({4.0, 2});
  CHECK_FALSE(index.contains({4.0, 2}));
  CHECK(index.size() == 0);
}

TEST_CASE("erased slots are recycled") {
  RankIndex index;
  for (std::uint32_t i = 0; i < 100; ++i) index.insert({static_cast<double>(i), i});
  const std::size_t bytes_full = index.allocated_bytes();
  for (std::uint32_t i = 0; i < 100; ++i) index.erase({static_cast<double>(i), i});
  for (std::uint32_t i = 0; i < 100; ++i)
    index.insert({static_cast<double>(i), 1000 + i});
  CHECK(index.allocated_bytes() == bytes_full);
  CHECK(index.size() == 100);
}
