#ifndef AVPOOL_LAYOUT_HPP
#define AVPOOL_LAYOUT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "avpool/core.hpp"
#include "avpool/rng.hpp"

namespace avpool {

/// Open facilities and the vehicles homed at each, in placement order.
struct FacilityLayout {
  std::vector<GridCoord> facilities;
  std::vector<std::int32_t> initial_vehicles;

  [[nodiscard]] std::size_t size() const { return facilities.size(); }
  [[nodiscard]] std::int64_t total_vehicles() const {
    return std::accumulate(initial_vehicles.begin(), initial_vehicles.end(), std::int64_t{0});
  }

  friend bool operator==(const FacilityLayout&, const FacilityLayout&) = default;
};

/// Facility counts of the ten shipped layout scenarios, from full pooling to
/// one facility per block.
inline constexpr std::array<std::int32_t, 10> kCanonicalLayoutCounts{1, 2, 4, 6, 9, 13, 20, 30, 42, 49};

inline void validate(const FacilityLayout& layout, const ScenarioConfig& config) {
  if (layout.facilities.size() != layout.initial_vehicles.size())
    throw InputError("layout: one vehicle count per facility required");
  if (layout.facilities.empty() && config.fleet_size > 0)
    throw InputError("layout: fleet has nowhere to park");
  std::set<GridCoord> seen;
  for (const auto& f : layout.facilities) {
    if (!on_grid(f, config)) throw InputError("layout: facility " + to_string(f) + " is off-grid");
    if (!seen.insert(f).second) throw InputError("layout: duplicate facility " + to_string(f));
  }
  for (auto n : layout.initial_vehicles)
    if (n < 0) throw InputError("layout: negative vehicle count");
  if (layout.total_vehicles() != config.fleet_size)
    throw InputError("layout: vehicle counts sum to " + std::to_string(layout.total_vehicles()) +
                     ", fleet_size is " + std::to_string(config.fleet_size));
  if (static_cast<std::int64_t>(layout.facilities.size()) > config.facility_capacity)
    throw InputError("layout: more facilities than facility_capacity");
}

/// Even split: counts differ by at most one, larger shares go first.
[[nodiscard]] inline std::vector<std::int32_t> split_evenly(std::int32_t total, std::size_t parts) {
  std::vector<std::int32_t> out(parts, 0);
  if (parts == 0) return out;
  const auto p = static_cast<std::int32_t>(parts);
  for (std::int32_t i = 0; i < p; ++i) out[static_cast<std::size_t>(i)] = total / p + (i < total % p ? 1 : 0);
  return out;
}

namespace detail {
inline void check_facility_count(std::int32_t k, const ScenarioConfig& config) {
  if (k < 1 || k > config.block_count())
    throw InputError("facility count " + std::to_string(k) + " outside [1, " +
                     std::to_string(config.block_count()) + "]");
}
}  // namespace detail

/// Midpoint block of the grid.
[[nodiscard]] inline GridCoord grid_midpoint(const ScenarioConfig& config) {
  return GridCoord{config.grid_width / 2, config.grid_height / 2};
}

/// Deterministic evenly-spread layout with k facilities. Starts from the
/// midpoint and greedily adds the block farthest (Manhattan, max-min) from
/// those already chosen; ties go to the first block in row-major order.
[[nodiscard]] inline FacilityLayout canonical_layout(std::int32_t k, const ScenarioConfig& config) {
  validate(config);
  detail::check_facility_count(k, config);
  const auto blocks = all_blocks(config);
  std::vector<Blocks> nearest(blocks.size());
  std::vector<bool> chosen(blocks.size(), false);

  FacilityLayout layout;
  auto take = [&](std::size_t i) {
    chosen[i] = true;
    layout.facilities.push_back(blocks[i]);
    for (std::size_t j = 0; j < blocks.size(); ++j)
      nearest[j] = layout.facilities.size() == 1
                       ? manhattan_distance(blocks[j], blocks[i])
                       : std::min(nearest[j], manhattan_distance(blocks[j], blocks[i]));
  };
  take(static_cast<std::size_t>(block_index(grid_midpoint(config), config.grid_width)));
  while (static_cast<std::int32_t>(layout.facilities.size()) < k) {
    std::size_t best = blocks.size();
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (chosen[j]) continue;
      if (best == blocks.size() || nearest[j] > nearest[best]) best = j;
    }
    take(best);
  }
  layout.initial_vehicles = split_evenly(config.fleet_size, layout.facilities.size());
  return layout;
}

/// k distinct blocks sampled uniformly (partial Fisher-Yates), even split.
[[nodiscard]] inline FacilityLayout random_layout(std::int32_t k, const ScenarioConfig& config,
                                                  std::uint64_t seed) {
  validate(config);
  detail::check_facility_count(k, config);
  auto blocks = all_blocks(config);
  Rng rng(derive_seed(seed, StreamKind::Layout, static_cast<std::uint64_t>(k)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(blocks.size() - i));
    std::swap(blocks[i], blocks[j]);
  }
  FacilityLayout layout;
  layout.facilities.assign(blocks.begin(), blocks.begin() + k);
  layout.initial_vehicles = split_evenly(config.fleet_size, layout.facilities.size());
  return layout;
}

}  // namespace avpool

#endif  // AVPOOL_LAYOUT_HPP
