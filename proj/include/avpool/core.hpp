#ifndef AVPOOL_CORE_HPP
#define AVPOOL_CORE_HPP

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace avpool {

/// Whole-currency amounts (smallest unit). All cost arithmetic is exact.
using Money = std::int64_t;
/// Discrete simulation time; one day spans [0, time_units_per_day).
using TimeUnit = std::int64_t;
using Blocks = std::int64_t;

/// Thrown when a documented precondition of an operation does not hold.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Thrown for malformed configuration, layouts or input documents.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct GridCoord {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(const GridCoord&, const GridCoord&) = default;
  // Row-major: y first, then x.
  friend constexpr std::strong_ordering operator<=>(const GridCoord& a, const GridCoord& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct CostParams {
  Money lost_sale_per_unit = 0;
  Money travel_per_block = 0;
  Money facility_open_per_time_unit = 0;

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct ScenarioConfig {
  std::int32_t grid_width = 7;
  std::int32_t grid_height = 7;
  std::int32_t fleet_size = 49;
  std::int32_t customers_per_day = 100;
  TimeUnit time_units_per_day = 600;
  double demand_probability = 0.05;
  Blocks patience_radius = 3;
  // When greater than patience_radius, each customer draws a radius uniformly
  // from [patience_radius, patience_radius_max].
  Blocks patience_radius_max = -1;
  Blocks vehicle_speed = 1;
  CostParams costs{50, 1, 0};
  std::int32_t facility_capacity = 49;

  [[nodiscard]] std::int32_t block_count() const { return grid_width * grid_height; }
  [[nodiscard]] bool per_customer_patience() const {
    return patience_radius_max > patience_radius;
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parameters of the real-case test scenario: free facilities, $1 per block,
/// $50 per lost sale, patience of 3 blocks.
inline ScenarioConfig real_case_config() { return ScenarioConfig{}; }

/// Parameters of the random test scenarios. The facility rate is one of 5, 10
/// or 15; patience ranges over 1..10 blocks.
inline ScenarioConfig random_case_config(Money facility_rate = 5) {
  ScenarioConfig c;
  c.costs = CostParams{5, 5, facility_rate};
  c.patience_radius = 1;
  c.patience_radius_max = 10;
  return c;
}

inline void validate(const CostParams& c) {
  if (c.lost_sale_per_unit < 0 || c.travel_per_block < 0 || c.facility_open_per_time_unit < 0)
    throw InputError("cost rates must be non-negative");
}

inline void validate(const ScenarioConfig& c) {
  if (c.grid_width < 1 || c.grid_height < 1) throw InputError("grid must have at least one block");
  if (c.fleet_size < 0) throw InputError("fleet_size must be >= 0");
  if (c.customers_per_day < 0) throw InputError("customers_per_day must be >= 0");
  if (c.time_units_per_day < 1) throw InputError("time_units_per_day must be >= 1");
  if (!(c.demand_probability >= 0.0 && c.demand_probability <= 1.0))
    throw InputError("demand_probability must lie in [0, 1]");
  if (c.patience_radius < 0) throw InputError("patience_radius must be >= 0");
  if (c.vehicle_speed < 1) throw InputError("vehicle_speed must be >= 1");
  if (c.facility_capacity < 1) throw InputError("facility_capacity must be >= 1");
  validate(c.costs);
}

[[nodiscard]] inline bool on_grid(const GridCoord& p, const ScenarioConfig& c) {
  return p.x >= 0 && p.y >= 0 && p.x < c.grid_width && p.y < c.grid_height;
}

/// Row-major block index of p.
[[nodiscard]] inline std::int32_t block_index(const GridCoord& p, std::int32_t grid_width) {
  return p.y * grid_width + p.x;
}

[[nodiscard]] inline GridCoord block_at(std::int32_t index, std::int32_t grid_width) {
  return GridCoord{index % grid_width, index / grid_width};
}

/// Every block of the grid in row-major order.
[[nodiscard]] inline std::vector<GridCoord> all_blocks(const ScenarioConfig& c) {
  std::vector<GridCoord> out;
  out.reserve(static_cast<std::size_t>(c.block_count()));
  for (std::int32_t y = 0; y < c.grid_height; ++y)
    for (std::int32_t x = 0; x < c.grid_width; ++x) out.push_back({x, y});
  return out;
}

[[nodiscard]] constexpr Blocks manhattan_distance(const GridCoord& a, const GridCoord& b) {
  const Blocks dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const Blocks dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx + dy;
}

[[nodiscard]] constexpr TimeUnit travel_time_for(Blocks distance, Blocks speed) {
  if (speed < 1) throw ContractViolation("vehicle speed must be >= 1");
  return (distance + speed - 1) / speed;
}

[[nodiscard]] constexpr TimeUnit travel_time(const GridCoord& a, const GridCoord& b, Blocks speed) {
  return travel_time_for(manhattan_distance(a, b), speed);
}

/// Largest Manhattan distance on the grid.
[[nodiscard]] inline Blocks grid_diameter(const ScenarioConfig& c) {
  return Blocks{c.grid_width - 1} + Blocks{c.grid_height - 1};
}

inline std::string to_string(const GridCoord& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

}  // namespace avpool

#endif  // AVPOOL_CORE_HPP
