#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "qrapnc/depq.hpp"
#include "qrapnc/rng.hpp"

using namespace qrapnc;

namespace {

TEST(Depq, BasicOrdering) {
  DepqPool pool;
  pool.insert(3.0, BreakpointTag::initial_lower, 1);
  pool.insert(1.0, BreakpointTag::initial_upper, 2);
  pool.insert(2.0, BreakpointTag::multiplier_lower, 3);
  EXPECT_EQ(pool.size(), 3u);
  auto mn = pool.peek_min();
  ASSERT_TRUE(mn);
  EXPECT_DOUBLE_EQ(mn->value, 1.0);
  EXPECT_EQ(mn->owner, 2u);
  auto mx = pool.peek_max();
  ASSERT_TRUE(mx);
  EXPECT_DOUBLE_EQ(mx->value, 3.0);
  auto popped = pool.pop_min();
  ASSERT_TRUE(popped);
  EXPECT_DOUBLE_EQ(popped->value, 1.0);
  EXPECT_EQ(pool.size(), 2u);
  EXPECT_DOUBLE_EQ(pool.peek_min()->value, 2.0);
  EXPECT_DOUBLE_EQ(pool.pop_max()->value, 3.0);
  EXPECT_DOUBLE_EQ(pool.pop_max()->value, 2.0);
  EXPECT_TRUE(pool.empty());
  EXPECT_FALSE(pool.peek_min());
  EXPECT_FALSE(pool.pop_max());
}

TEST(Depq, TiesBreakByInsertionOrder) {
  DepqPool pool;
  auto first = pool.insert(5.0, BreakpointTag::initial_lower, 1);
  auto second = pool.insert(5.0, BreakpointTag::initial_lower, 2);
  EXPECT_EQ(pool.peek_min()->id, first);
  EXPECT_EQ(pool.peek_max()->id, second);
  pool.pop_min();
  EXPECT_EQ(pool.peek_min()->id, second);
  EXPECT_EQ(pool.peek_max()->id, second);
}

TEST(Depq, RemoveAndRetag) {
  DepqPool pool;
  auto a = pool.insert(1.0, BreakpointTag::initial_lower, 1);
  auto b = pool.insert(2.0, BreakpointTag::initial_upper, 1);
  pool.remove(a);
  EXPECT_EQ(pool.size(), 1u);
  EXPECT_DOUBLE_EQ(pool.peek_min()->value, 2.0);
  EXPECT_THROW(pool.remove(a), InternalError);
  EXPECT_THROW(pool.get(a), InternalError);
  EXPECT_THROW(pool.retag(a, 5), InternalError);
  pool.retag(b, 9);
  EXPECT_EQ(pool.get(b).owner, 9u);
  EXPECT_EQ(pool.get(b).tag, BreakpointTag::initial_upper);
  EXPECT_THROW(pool.remove(999), InternalError);
}

TEST(Depq, IdsNeverReused) {
  DepqPool pool;
  auto a = pool.insert(1.0, BreakpointTag::initial_lower, 1);
  pool.remove(a);
  auto b = pool.insert(1.0, BreakpointTag::initial_lower, 1);
  EXPECT_NE(a, b);
}

// Drive the pool and a sorted-multiset model with the same random op stream;
// every observable result must match.
TEST(Depq, MatchesReferenceModel) {
  std::mt19937_64 eng(2024);
  DepqPool pool;
  std::map<std::pair<double, DepqPool::EntryId>, DepqPool::EntryId> model;
  std::vector<DepqPool::EntryId> live;

  const int kOps = 20000;
  for (int op = 0; op < kOps; ++op) {
    const double roll = uniform_unit(eng);
    if (roll < 0.45 || live.empty()) {
      const double value = std::floor(uniform_in(eng, -50.0, 50.0) * 4.0) / 4.0;
      auto id = pool.insert(value, BreakpointTag::initial_lower, 1);
      model.emplace(std::make_pair(value, id), id);
      live.push_back(id);
    } else if (roll < 0.65) {
      auto got = pool.pop_min();
      ASSERT_TRUE(got);
      ASSERT_FALSE(model.empty());
      auto it = model.begin();
      EXPECT_EQ(got->id, it->second) << "op " << op;
      EXPECT_DOUBLE_EQ(got->value, it->first.first);
      live.erase(std::find(live.begin(), live.end(), it->second));
      model.erase(it);
    } else if (roll < 0.85) {
      auto got = pool.pop_max();
      ASSERT_TRUE(got);
      ASSERT_FALSE(model.empty());
      auto it = std::prev(model.end());
      EXPECT_EQ(got->id, it->second) << "op " << op;
      EXPECT_DOUBLE_EQ(got->value, it->first.first);
      live.erase(std::find(live.begin(), live.end(), it->second));
      model.erase(it);
    } else {
      const std::size_t pick = static_cast<std::size_t>(uniform_unit(eng) * live.size());
      const auto id = live[std::min(pick, live.size() - 1)];
      const double value = pool.get(id).value;
      pool.remove(id);
      model.erase({value, id});
      live.erase(std::find(live.begin(), live.end(), id));
    }
    ASSERT_EQ(pool.size(), model.size()) << "op " << op;
    if (!model.empty()) {
      EXPECT_EQ(pool.peek_min()->id, model.begin()->second);
      EXPECT_EQ(pool.peek_max()->id, std::prev(model.end())->second);
    }
  }
}

TEST(Depq, CompareCountWithinHeapBound) {
  // N inserts then N alternating pops; each heap op costs at most
  // 2 * log2(N) compares, so the total stays within 8 N log2 N overall.
  const std::size_t n = 32768;
  DepqPool pool;
  pool.reserve(n);
  std::mt19937_64 eng(7);
  for (std::size_t i = 0; i < n; ++i)
    pool.insert(uniform_unit(eng), BreakpointTag::initial_lower, 1);
  bool from_min = true;
  while (!pool.empty()) {
    if (from_min)
      pool.pop_min();
    else
      pool.pop_max();
    from_min = !from_min;
  }
  const double bound = 8.0 * static_cast<double>(n) * std::log2(static_cast<double>(n));
  EXPECT_LT(static_cast<double>(pool.compare_count()), bound);
  EXPECT_EQ(pool.op_count(), 2 * n);  // one op per public call, lazy pops do not inflate it
}

}  // namespace
