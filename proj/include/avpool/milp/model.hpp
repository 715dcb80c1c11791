#ifndef AVPOOL_MILP_MODEL_HPP
#define AVPOOL_MILP_MODEL_HPP

#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "avpool/core.hpp"
#include "avpool/demand.hpp"
#include "avpool/engine.hpp"

namespace avpool::milp {

using avpool::Rational;
using LocationIndex = std::int32_t;

/// A customer of the realized demand sample, located by block index.
struct InstanceCustomer {
  CustomerId id = 0;
  LocationIndex origin = 0;
  LocationIndex destination = 0;
  TimeUnit arrival = 0;
  Blocks patience = 0;

  friend bool operator==(const InstanceCustomer&, const InstanceCustomer&) = default;
};

/// Deterministic-equivalent data of the allocation model over one realized
/// demand sample. Locations are grid blocks in row-major order; vehicle pools
/// are fixed identity sets per location, constant over time.
struct ModelInstance {
  std::vector<GridCoord> locations;
  TimeUnit horizon = 1;
  std::vector<InstanceCustomer> customers;
  std::vector<std::vector<VehicleId>> vehicle_pools;  // per location
  std::vector<Blocks> distance;                       // row-major |V|x|V|
  std::vector<TimeUnit> travel_time;                  // row-major |V|x|V|
  std::vector<Money> lost_sale_cost;                  // per t
  std::vector<Money> travel_cost;                     // per t
  std::vector<Money> facility_cost;                   // per t
  std::vector<std::int32_t> facility_capacity;        // per t
  std::int32_t fleet_size = 0;
  Money big_m = 0;

  [[nodiscard]] std::size_t location_count() const { return locations.size(); }
  [[nodiscard]] Blocks d(LocationIndex a, LocationIndex b) const {
    return distance[static_cast<std::size_t>(a) * locations.size() + static_cast<std::size_t>(b)];
  }
  [[nodiscard]] TimeUnit tt(LocationIndex a, LocationIndex b) const {
    return travel_time[static_cast<std::size_t>(a) * locations.size() + static_cast<std::size_t>(b)];
  }

  friend bool operator==(const ModelInstance&, const ModelInstance&) = default;
};

/// Smallest admissible big-M: strictly above every distance and patience.
[[nodiscard]] inline Money minimum_big_m(const ModelInstance& inst) {
  Money m = 0;
  for (auto d : inst.distance) m = std::max<Money>(m, d);
  for (const auto& c : inst.customers) m = std::max<Money>(m, c.patience);
  return m + 1;
}

/// Default big-M: ten times (grid diameter + largest patience radius).
[[nodiscard]] inline Money default_big_m(const ModelInstance& inst) {
  Blocks diameter = 0;
  for (auto d : inst.distance) diameter = std::max(diameter, d);
  Blocks patience = 0;
  for (const auto& c : inst.customers) patience = std::max(patience, c.patience);
  return std::max<Money>(10 * (diameter + patience), minimum_big_m(inst));
}

/// Builds the instance realized by one simulated day on a grid. Rates are
/// uniform over the day; `horizon` may exceed the day length to let
/// late trips finish, in which case facility cost is zero past the day.
[[nodiscard]] inline ModelInstance make_instance(const ScenarioConfig& config, const FacilityLayout& layout,
                                                 std::span<const CustomerRequest> requests,
                                                 std::optional<TimeUnit> horizon = std::nullopt) {
  validate(config);
  validate(layout, config);
  ModelInstance inst;
  inst.locations = all_blocks(config);
  inst.horizon = horizon.value_or(config.time_units_per_day);
  if (inst.horizon < config.time_units_per_day) throw InputError("horizon shorter than the day");
  const auto L = inst.locations.size();
  inst.distance.resize(L * L);
  inst.travel_time.resize(L * L);
  for (std::size_t a = 0; a < L; ++a)
    for (std::size_t b = 0; b < L; ++b) {
      inst.distance[a * L + b] = manhattan_distance(inst.locations[a], inst.locations[b]);
      inst.travel_time[a * L + b] = travel_time(inst.locations[a], inst.locations[b], config.vehicle_speed);
    }
  for (const auto& r : requests) {
    validate(r, config);
    inst.customers.push_back(InstanceCustomer{r.id, block_index(r.origin, config.grid_width),
                                              block_index(r.destination, config.grid_width), r.arrival_time,
                                              r.patience_radius});
  }
  inst.vehicle_pools.resize(L);
  for (const auto& v : initial_fleet(layout))
    inst.vehicle_pools[static_cast<std::size_t>(block_index(v.home_facility, config.grid_width))].push_back(v.id);
  const auto H = static_cast<std::size_t>(inst.horizon);
  inst.lost_sale_cost.assign(H, config.costs.lost_sale_per_unit);
  inst.travel_cost.assign(H, config.costs.travel_per_block);
  inst.facility_cost.assign(H, 0);
  for (TimeUnit t = 0; t < config.time_units_per_day; ++t)
    inst.facility_cost[static_cast<std::size_t>(t)] = config.costs.facility_open_per_time_unit;
  inst.facility_capacity.assign(H, config.facility_capacity);
  inst.fleet_size = config.fleet_size;
  inst.big_m = default_big_m(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Symbolic model

enum class Family : char { x = 'x', y = 'y', z = 'z', w = 'w', f = 'f', n = 'n', g = 'g' };

/// Index tuples per family:
///   x (v,m,k,t)  y (m,v,c,u,k,t)  z (c,from,to,t)  w (m,v,t)
///   f (v,t)      n (v,t)          g (v,t) auxiliary for n*f
struct VariableIndex {
  Family family = Family::x;
  std::vector<std::int64_t> indices;

  [[nodiscard]] std::string name() const {
    std::string s(1, static_cast<char>(family));
    for (auto i : indices) {
      s += '_';
      s += std::to_string(i);
    }
    return s;
  }

  friend bool operator==(const VariableIndex&, const VariableIndex&) = default;
  friend auto operator<=>(const VariableIndex&, const VariableIndex&) = default;
};

[[nodiscard]] inline std::size_t family_arity(Family f) {
  switch (f) {
    case Family::x: return 4;
    case Family::y: return 6;
    case Family::z: return 4;
    case Family::w: return 3;
    default: return 2;
  }
}

/// Inverse of VariableIndex::name(); nullopt for malformed names.
[[nodiscard]] inline std::optional<VariableIndex> parse_variable_name(const std::string& name) {
  if (name.size() < 3 || name[1] != '_') return std::nullopt;
  VariableIndex idx;
  switch (name[0]) {
    case 'x': idx.family = Family::x; break;
    case 'y': idx.family = Family::y; break;
    case 'z': idx.family = Family::z; break;
    case 'w': idx.family = Family::w; break;
    case 'f': idx.family = Family::f; break;
    case 'n': idx.family = Family::n; break;
    case 'g': idx.family = Family::g; break;
    default: return std::nullopt;
  }
  std::size_t pos = 2;
  while (pos <= name.size()) {
    const auto end = name.find('_', pos);
    const auto part = name.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    idx.indices.push_back(std::stoll(part));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  if (idx.indices.size() != family_arity(idx.family)) return std::nullopt;
  return idx;
}

enum class VarType { Continuous, Integer, Binary };

struct Variable {
  VariableIndex index;
  std::string name;
  Rational lower{0};
  Rational upper{1};
  VarType type = VarType::Binary;
};

struct Term {
  std::size_t variable = 0;
  Rational coefficient{0};

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  Rational rhs{0};
};

/// Links a supply row to the n, f and auxiliary g variables of its (u,t), so
/// the original product form n*f can be evaluated directly.
struct SupplyLink {
  std::size_t row = 0;
  std::size_t n = 0;
  std::size_t f = 0;
  std::size_t g = 0;
};

struct Model {
  std::vector<Variable> variables;
  std::vector<Term> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<SupplyLink> supply_links;
  std::map<VariableIndex, std::size_t> lookup;
  Rational big_m{0};
  Rational fleet_bound{0};

  [[nodiscard]] std::optional<std::size_t> find(const VariableIndex& idx) const {
    auto it = lookup.find(idx);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::size_t count_rows_with_prefix(const std::string& prefix) const {
    std::size_t n = 0;
    for (const auto& r : constraints)
      if (r.name.rfind(prefix, 0) == 0) ++n;
    return n;
  }
  [[nodiscard]] std::size_t count_variables(Family f) const {
    std::size_t n = 0;
    for (const auto& v : variables)
      if (v.index.family == f) ++n;
    return n;
  }
};

/// Values of a candidate solution; variables not listed are zero.
using Assignment = std::map<VariableIndex, Rational>;

}  // namespace avpool::milp

#endif  // AVPOOL_MILP_MODEL_HPP
