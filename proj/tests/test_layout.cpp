#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "avpool/io.hpp"
#include "avpool/layout.hpp"

namespace avpool {
namespace {

// Farthest-point greedy written out over raw coordinates, independent of the
// library's bookkeeping.
std::vector<GridCoord> greedy_reference(std::int32_t k, std::int32_t w, std::int32_t h) {
  std::vector<GridCoord> chosen{{w / 2, h / 2}};
  while (static_cast<std::int32_t>(chosen.size()) < k) {
    GridCoord best{};
    Blocks best_d = -1;
    for (std::int32_t y = 0; y < h; ++y) {
      for (std::int32_t x = 0; x < w; ++x) {
        GridCoord p{x, y};
        if (std::find(chosen.begin(), chosen.end(), p) != chosen.end()) continue;
        Blocks d = 1 << 30;
        for (const auto& c : chosen) d = std::min<Blocks>(d, std::abs(c.x - x) + std::abs(c.y - y));
        if (d > best_d) {
          best_d = d;
          best = p;
        }
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

TEST(CanonicalLayout, SingleFacilityAtMidpoint) {
  const auto l = canonical_layout(1, ScenarioConfig{});
  EXPECT_EQ(l.facilities, (std::vector<GridCoord>{{3, 3}}));
  EXPECT_EQ(l.initial_vehicles, (std::vector<std::int32_t>{49}));
}

TEST(CanonicalLayout, OneVehiclePerBlock) {
  const auto l = canonical_layout(49, ScenarioConfig{});
  EXPECT_EQ(std::set<GridCoord>(l.facilities.begin(), l.facilities.end()).size(), 49u);
  EXPECT_TRUE(std::all_of(l.initial_vehicles.begin(), l.initial_vehicles.end(), [](auto n) { return n == 1; }));
}

TEST(CanonicalLayout, TwoFacilities) {
  const auto l = canonical_layout(2, ScenarioConfig{});
  EXPECT_EQ(l.facilities, (std::vector<GridCoord>{{3, 3}, {0, 0}}));
  EXPECT_EQ(l.initial_vehicles, (std::vector<std::int32_t>{25, 24}));
}

TEST(CanonicalLayout, MatchesReferenceGreedyOnManyGrids) {
  for (std::int32_t w = 1; w <= 7; ++w) {
    for (std::int32_t h = 1; h <= 7; ++h) {
      ScenarioConfig c;
      c.grid_width = w;
      c.grid_height = h;
      c.facility_capacity = w * h;
      for (std::int32_t k = 1; k <= w * h; ++k) ASSERT_EQ(canonical_layout(k, c).facilities, greedy_reference(k, w, h));
    }
  }
}

TEST(CanonicalLayout, ShippedCountsAreNestedAndValid) {
  ScenarioConfig c;
  std::vector<GridCoord> previous;
  for (auto k : kCanonicalLayoutCounts) {
    const auto l = canonical_layout(k, c);
    ASSERT_EQ(l.size(), static_cast<std::size_t>(k));
    ASSERT_NO_THROW(validate(l, c));
    ASSERT_TRUE(std::equal(previous.begin(), previous.end(), l.facilities.begin()));
    previous = l.facilities;
  }
}

TEST(SplitEvenly, LargerSharesFirst) {
  EXPECT_EQ(split_evenly(49, 4), (std::vector<std::int32_t>{13, 12, 12, 12}));
  EXPECT_EQ(split_evenly(3, 5), (std::vector<std::int32_t>{1, 1, 1, 0, 0}));
  for (std::int32_t total = 0; total < 60; ++total) {
    for (std::size_t parts = 1; parts < 12; ++parts) {
      const auto s = split_evenly(total, parts);
      ASSERT_EQ(std::accumulate(s.begin(), s.end(), 0), total);
      ASSERT_LE(s.front() - s.back(), 1);
      ASSERT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
    }
  }
}

TEST(RandomLayout, AllBlocksWhenKIsTheGrid) {
  ScenarioConfig c;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto l = random_layout(49, c, seed);
    EXPECT_EQ(std::set<GridCoord>(l.facilities.begin(), l.facilities.end()).size(), 49u);
  }
}

TEST(RandomLayout, DeterministicAndValid) {
  ScenarioConfig c;
  EXPECT_EQ(random_layout(5, c, 42), random_layout(5, c, 42));
  std::mt19937_64 gen(5);
  std::set<GridCoord> singles;
  for (int i = 0; i < 200; ++i) {
    const auto k = static_cast<std::int32_t>(gen() % 49 + 1);
    const auto l = random_layout(k, c, gen());
    ASSERT_NO_THROW(validate(l, c));
    ASSERT_EQ(l.size(), static_cast<std::size_t>(k));
    singles.insert(random_layout(1, c, static_cast<std::uint64_t>(i)).facilities[0]);
  }
  EXPECT_GT(singles.size(), 1u);
}

TEST(Layout, RejectsBadCountsAndLayouts) {
  ScenarioConfig c;
  EXPECT_THROW((void)canonical_layout(0, c), InputError);
  EXPECT_THROW((void)canonical_layout(50, c), InputError);
  EXPECT_THROW((void)random_layout(0, c, 1), InputError);
  EXPECT_THROW(validate(FacilityLayout{{{0, 0}, {0, 0}}, {25, 24}}, c), InputError);
  EXPECT_THROW(validate(FacilityLayout{{{7, 0}}, {49}}, c), InputError);
  EXPECT_THROW(validate(FacilityLayout{{{0, 0}}, {48}}, c), InputError);
  EXPECT_THROW(validate(FacilityLayout{{}, {}}, c), InputError);
  c.facility_capacity = 1;
  EXPECT_THROW(validate(FacilityLayout{{{0, 0}, {1, 0}}, {25, 24}}, c), InputError);
}

TEST(LayoutJson, RoundTrip) {
  ScenarioConfig c;
  const auto l = canonical_layout(6, c);
  EXPECT_EQ(layout_from_json(to_json(l), c), l);
  EXPECT_THROW((void)layout_from_json(Json::parse(R"({"facilities":[{"x":0,"y":0,"vehicles":1}]})"), c), InputError);
}

}  // namespace
}  // namespace avpool
