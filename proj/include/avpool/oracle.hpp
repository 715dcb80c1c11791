#ifndef AVPOOL_ORACLE_HPP
#define AVPOOL_ORACLE_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "avpool/engine.hpp"
#include "avpool/rng.hpp"

namespace avpool {

/// Toy instance small enough to enumerate every serve/reject sequence.
struct TinyInstance {
  ScenarioConfig config;
  FacilityLayout layout;
  std::vector<CustomerRequest> customers;
};

inline constexpr std::int32_t kTinyMaxSide = 3;
inline constexpr TimeUnit kTinyMaxHorizon = 6;
inline constexpr std::int32_t kTinyMaxVehicles = 2;
inline constexpr std::size_t kTinyMaxCustomers = 3;

inline void validate(const TinyInstance& inst) {
  const auto& c = inst.config;
  validate(c);
  validate(inst.layout, c);
  if (c.grid_width > kTinyMaxSide || c.grid_height > kTinyMaxSide || c.time_units_per_day > kTinyMaxHorizon ||
      c.fleet_size > kTinyMaxVehicles || inst.customers.size() > kTinyMaxCustomers)
    throw InputError("instance exceeds the exhaustive-search bounds (3x3 grid, T<=6, 2 vehicles, 3 customers)");
  for (const auto& r : inst.customers) validate(r, c);
}

struct OracleResult {
  CostLedger ledger;
  EventLog trace;
  std::uint64_t leaves = 0;

  [[nodiscard]] Money cost() const { return ledger.total; }
};

namespace detail {

inline void advance_to(Simulator& sim, TimeUnit t) {
  sim.begin_time_unit();
  while (sim.clock() < t) {
    sim.end_time_unit();
    sim.begin_time_unit();
  }
}

struct OracleSearch {
  std::vector<CustomerRequest> order;
  TimeUnit horizon = 0;
  std::optional<OracleResult> best;
  std::uint64_t leaves = 0;

  void explore(Simulator& sim, std::size_t next) {
    if (next == order.size()) {
      advance_to(sim, horizon);
      sim.drain();
      ++leaves;
      if (!best || sim.ledger().total < best->ledger.total) best = OracleResult{sim.ledger(), sim.log(), 0};
      return;
    }
    const CustomerRequest& c = order[next];
    advance_to(sim, c.arrival_time);
    const SystemState& state = sim.state();
    for (std::size_t f : state.search_order) {
      if (manhattan_distance(state.open_facilities[f], c.origin) > c.patience_radius) continue;
      // Pools are stored descending; try ids ascending.
      for (auto it = state.idle[f].rbegin(); it != state.idle[f].rend(); ++it) {
        Simulator branch = sim;
        branch.dispatch(c, f, *it);
        explore(branch, next + 1);
      }
    }
    Simulator branch = sim;
    branch.reject(c);
    explore(branch, next + 1);
  }
};

}  // namespace detail

/// Minimum-cost outcome over every sequence of decisions the simulator
/// admits: each customer, in arrival-then-priority order, is either rejected
/// or served by any idle vehicle whose facility is within its patience radius.
[[nodiscard]] inline OracleResult exact_min_cost(const TinyInstance& inst) {
  validate(inst);
  detail::OracleSearch search;
  search.horizon = inst.config.time_units_per_day;
  search.order = inst.customers;
  std::stable_sort(search.order.begin(), search.order.end(), [](const auto& a, const auto& b) {
    if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
    if (a.patience_radius != b.patience_radius) return a.patience_radius < b.patience_radius;
    return a.id < b.id;
  });
  Simulator sim(inst.config, inst.layout);
  search.explore(sim, 0);
  auto result = *search.best;
  result.leaves = search.leaves;
  return result;
}

/// The heuristic's result on the same instance.
[[nodiscard]] inline DayResult heuristic_day(const TinyInstance& inst) {
  validate(inst);
  return run_day(inst.config, inst.layout, inst.customers);
}

/// Random instance within the exhaustive-search bounds.
[[nodiscard]] inline TinyInstance random_tiny_instance(std::uint64_t seed, std::uint64_t index) {
  Rng rng(derive_seed(seed, StreamKind::Instance, index));
  TinyInstance inst;
  auto& c = inst.config;
  do {
    c.grid_width = static_cast<std::int32_t>(rng.between(1, kTinyMaxSide));
    c.grid_height = static_cast<std::int32_t>(rng.between(1, kTinyMaxSide));
  } while (c.block_count() < 2);
  c.time_units_per_day = rng.between(1, kTinyMaxHorizon);
  c.fleet_size = static_cast<std::int32_t>(rng.between(0, kTinyMaxVehicles));
  c.vehicle_speed = rng.between(1, 2);
  c.patience_radius = rng.between(0, 4);
  c.patience_radius_max = -1;
  c.costs = CostParams{rng.between(0, 60), rng.between(0, 6), rng.between(0, 5)};
  c.facility_capacity = c.block_count();
  const auto customers = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(kTinyMaxCustomers)));
  c.customers_per_day = static_cast<std::int32_t>(customers);
  c.demand_probability = 0.0;

  const auto k = static_cast<std::int32_t>(rng.between(1, std::min<std::int64_t>(2, c.block_count())));
  inst.layout = random_layout(k, c, rng.next_u64());

  const auto blocks = static_cast<std::uint64_t>(c.block_count());
  for (std::size_t i = 0; i < customers; ++i) {
    CustomerRequest r;
    r.id = static_cast<CustomerId>(i);
    const auto o = rng.below(blocks);
    auto d = rng.below(blocks - 1);
    if (d >= o) ++d;
    r.origin = block_at(static_cast<std::int32_t>(o), c.grid_width);
    r.destination = block_at(static_cast<std::int32_t>(d), c.grid_width);
    r.arrival_time = rng.between(0, c.time_units_per_day - 1);
    r.patience_radius = rng.between(0, 4);
    inst.customers.push_back(r);
  }
  return inst;
}

struct GapStats {
  std::size_t instances = 0;
  std::size_t optimal = 0;     // heuristic == oracle
  std::size_t violations = 0;  // heuristic < oracle (must stay zero)
  Money min_gap = 0;
  Money max_gap = 0;
  Rational mean_gap{0};
};

/// Heuristic-minus-optimal statistics over `count` random tiny instances.
[[nodiscard]] inline GapStats compare_with_oracle(std::uint64_t seed, std::size_t count) {
  GapStats s;
  Money sum = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto inst = random_tiny_instance(seed, i);
    const Money gap = heuristic_day(inst).ledger.total - exact_min_cost(inst).cost();
    if (s.instances == 0 || gap < s.min_gap) s.min_gap = gap;
    if (s.instances == 0 || gap > s.max_gap) s.max_gap = gap;
    if (gap == 0) ++s.optimal;
    if (gap < 0) ++s.violations;
    sum += gap;
    ++s.instances;
  }
  if (count > 0) s.mean_gap = Rational(sum, static_cast<std::int64_t>(count));
  return s;
}

}  // namespace avpool

#endif  // AVPOOL_ORACLE_HPP
