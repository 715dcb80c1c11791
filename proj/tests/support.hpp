#ifndef AVPOOL_TESTS_SUPPORT_HPP
#define AVPOOL_TESTS_SUPPORT_HPP

// Shared generators and independent reference computations for the tests.

#include <cstdint>
#include <map>
#include <string>
#include <random>
#include <vector>

#include "avpool/avpool.hpp"

namespace avpool::testing {

/// Cost of a day recomputed from its event log with the objective formula:
/// K1 per lost sale, K2*(d_vk + d_kv) per same-location trip,
/// K2*(d_uv + d_vk + d_ku) per cross-location trip, K3 per facility tick.
inline CostLedger cost_from_log(const EventLog& log, const CostParams& k) {
  CostLedger l;
  for (const auto& e : log.events) {
    const auto dist = [](GridCoord a, GridCoord b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); };
    switch (e.type) {
      case EventType::LostSale: l.lost_sale_cost += k.lost_sale_per_unit; break;
      case EventType::ServedSameLocation:
        l.travel_cost += k.travel_per_block * (dist(e.origin, e.destination) + dist(e.destination, e.origin));
        break;
      case EventType::ServedCrossLocation:
        l.travel_cost += k.travel_per_block * (dist(e.facility, e.origin) + dist(e.origin, e.destination) +
                                               dist(e.destination, e.facility));
        break;
      case EventType::FacilityOpenTick: l.facility_cost += k.facility_open_per_time_unit; break;
    }
  }
  l.total = l.lost_sale_cost + l.travel_cost + l.facility_cost;
  return l;
}

/// Random scenario within the ranges of the published parameter tables,
/// scaled down where noted so property suites stay fast.
inline ScenarioConfig random_config(std::mt19937_64& gen, bool small = false) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen); };
  ScenarioConfig c;
  if (small) {
    c.grid_width = static_cast<std::int32_t>(pick(2, 4));
    c.grid_height = static_cast<std::int32_t>(pick(1, 4));
    c.time_units_per_day = pick(1, 20);
    c.fleet_size = static_cast<std::int32_t>(pick(0, 6));
    c.customers_per_day = static_cast<std::int32_t>(pick(0, 12));
  } else {
    c.grid_width = 7;
    c.grid_height = 7;
    c.time_units_per_day = pick(60, 600);
    c.fleet_size = 49;
    c.customers_per_day = 100;
  }
  c.demand_probability = std::array{0.01, 0.05, 0.1, 0.2, 0.3, 1.0}[static_cast<std::size_t>(pick(0, 5))];
  c.patience_radius = pick(0, 10);
  c.patience_radius_max = pick(0, 1) ? c.patience_radius + pick(1, 5) : -1;
  c.vehicle_speed = pick(1, 2);
  switch (pick(0, 1)) {
    case 0: c.costs = CostParams{5, 5, std::array{5, 10, 15}[static_cast<std::size_t>(pick(0, 2))]}; break;
    default: c.costs = CostParams{50, 1, 0}; break;
  }
  c.facility_capacity = c.block_count();
  return c;
}

inline FacilityLayout random_layout_for(std::mt19937_64& gen, const ScenarioConfig& c) {
  const auto k = static_cast<std::int32_t>(std::uniform_int_distribution<std::int64_t>(1, c.block_count())(gen));
  if (gen() % 2 == 0) return canonical_layout(k, c);
  return random_layout(k, c, gen());
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

/// Simulates one day and checks, after every time unit and at the end:
/// vehicle conservation, outcome exclusivity, patience feasibility,
/// single assignment per vehicle, return home, and that the ledger equals
/// the objective recomputed from the event log. Returns "" when all hold.
inline std::string check_day_invariants(const ScenarioConfig& config, const FacilityLayout& layout,
                                        const std::vector<CustomerRequest>& requests) {
  std::string failure;
  auto fail = [&](const std::string& what) {
    if (failure.empty()) failure = what;
  };

  // Homes from the layout directly: ids run facility by facility.
  std::vector<GridCoord> home;
  for (std::size_t i = 0; i < layout.size(); ++i)
    for (std::int32_t n = 0; n < layout.initial_vehicles[i]; ++n) home.push_back(layout.facilities[i]);

  std::map<CustomerId, const CustomerRequest*> by_id;
  for (const auto& r : requests) by_id[r.id] = &r;
  bool ended_home = false;

  auto observer = [&](const Simulator& sim) {
    try {
      sim.check_invariants();
    } catch (const std::exception& e) {
      fail(std::string("state invariant at t=") + std::to_string(sim.clock()) + ": " + e.what());
    }
    std::int64_t idle = 0, busy = 0;
    for (const auto& v : sim.state().vehicles) (v.idle() ? idle : busy) += 1;
    if (idle + busy != config.fleet_size) fail("vehicle count changed");
    const auto recomputed = cost_from_log(sim.log(), config.costs);
    if (!(recomputed == sim.ledger())) fail("ledger differs from log at t=" + std::to_string(sim.clock()));
    for (const auto& v : sim.state().vehicles)
      if (v.home_facility != home[static_cast<std::size_t>(v.id)]) fail("vehicle changed home");
    ended_home = sim.all_idle();
  };
  const auto day = run_day(config, layout, requests, true, observer);

  std::map<CustomerId, int> outcomes;
  std::map<VehicleId, TimeUnit> free_at;
  for (const auto& e : day.log.events) {
    if (e.type == EventType::FacilityOpenTick) {
      if (e.t >= config.time_units_per_day) fail("facility charged after the day");
      continue;
    }
    ++outcomes[e.customer];
    const auto it = by_id.find(e.customer);
    if (it == by_id.end()) {
      fail("event for unknown customer");
      continue;
    }
    const auto& r = *it->second;
    if (e.t != r.arrival_time) fail("customer resolved at a different time than its arrival");
    if (e.type == EventType::LostSale) continue;
    if (e.vehicle < 0 || static_cast<std::size_t>(e.vehicle) >= home.size()) {
      fail("dispatch of unknown vehicle");
      continue;
    }
    if (home[static_cast<std::size_t>(e.vehicle)] != e.facility) fail("vehicle dispatched away from home");
    const Blocks reach = std::abs(e.facility.x - r.origin.x) + std::abs(e.facility.y - r.origin.y);
    if (reach > r.patience_radius) fail("service outside patience radius");
    if ((reach == 0) != (e.type == EventType::ServedSameLocation)) fail("service type does not match distance");
    auto [slot, fresh] = free_at.try_emplace(e.vehicle, 0);
    if (!fresh && e.t < slot->second) fail("vehicle assigned while busy");
    const Blocks ride = std::abs(r.origin.x - r.destination.x) + std::abs(r.origin.y - r.destination.y);
    const Blocks back = std::abs(r.destination.x - e.facility.x) + std::abs(r.destination.y - e.facility.y);
    slot->second = e.t + ceil_div(reach, config.vehicle_speed) + ceil_div(ride, config.vehicle_speed) +
                   ceil_div(back, config.vehicle_speed);
  }
  for (const auto& r : requests)
    if (outcomes[r.id] != 1) fail("customer " + std::to_string(r.id) + " has " + std::to_string(outcomes[r.id]) + " outcomes");
  if (outcomes.size() != requests.size()) fail("outcomes for customers never requested");
  if (!(cost_from_log(day.log, config.costs) == day.ledger)) fail("final ledger differs from log");
  if (!ended_home) fail("vehicles still away from home after the day");
  return failure;
}

}  // namespace avpool::testing

#endif  // AVPOOL_TESTS_SUPPORT_HPP
