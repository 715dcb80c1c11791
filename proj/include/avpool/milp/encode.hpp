#ifndef AVPOOL_MILP_ENCODE_HPP
#define AVPOOL_MILP_ENCODE_HPP

#include <map>
#include <span>
#include <vector>

#include "avpool/engine.hpp"
#include "avpool/milp/build.hpp"
#include "avpool/milp/validate.hpp"

namespace avpool::milp {

struct EncodedDay {
  ModelInstance instance;
  Model model;
  Assignment assignment;
};

/// Translates a simulated day into the model over the same realized demand
/// and the assignment that the day's decisions correspond to. The horizon is
/// extended past the day when trips finish late; facility cost is zero there.
[[nodiscard]] inline EncodedDay encode_simulation(const ScenarioConfig& config, const FacilityLayout& layout,
                                                  std::span<const CustomerRequest> requests, const EventLog& log) {
  validate(config);
  validate(layout, config);
  std::map<CustomerId, const CustomerRequest*> by_id;
  for (const auto& r : requests) {
    validate(r, config);
    if (!by_id.emplace(r.id, &r).second) throw InputError("duplicate customer id " + std::to_string(r.id));
  }
  const auto fleet = initial_fleet(layout);
  const Blocks speed = config.vehicle_speed;

  struct Outcome {
    const Event* event;
    TimeUnit back;  // time the vehicle is idle at home again
  };
  std::map<CustomerId, Outcome> outcomes;
  TimeUnit horizon = config.time_units_per_day;
  for (const auto& e : log.events) {
    if (e.type == EventType::FacilityOpenTick) continue;
    auto it = by_id.find(e.customer);
    if (it == by_id.end()) throw InputError("event for unknown customer " + std::to_string(e.customer));
    const auto& r = *it->second;
    if (e.t != r.arrival_time || e.origin != r.origin || e.destination != r.destination)
      throw InputError("event for customer " + std::to_string(e.customer) + " disagrees with its request");
    TimeUnit back = e.t;
    if (e.type != EventType::LostSale) {
      if (e.vehicle < 0 || static_cast<std::size_t>(e.vehicle) >= fleet.size() ||
          fleet[static_cast<std::size_t>(e.vehicle)].home_facility != e.facility)
        throw InputError("event for customer " + std::to_string(e.customer) + " names a vehicle not homed there");
      const bool same = e.type == EventType::ServedSameLocation;
      if (same != (e.facility == e.origin))
        throw InputError("event for customer " + std::to_string(e.customer) + " has the wrong service type");
      if (manhattan_distance(e.facility, e.origin) > r.patience_radius)
        throw InputError("event for customer " + std::to_string(e.customer) + " exceeds the patience radius");
      back = e.t + travel_time(e.facility, e.origin, speed) + travel_time(e.origin, e.destination, speed) +
             travel_time(e.destination, e.facility, speed);
      horizon = std::max(horizon, back + 1);
    }
    if (!outcomes.emplace(e.customer, Outcome{&e, back}).second)
      throw InputError("customer " + std::to_string(e.customer) + " has more than one outcome");
  }
  if (outcomes.size() != by_id.size()) throw InputError("some customers have no outcome in the log");

  EncodedDay out;
  out.instance = make_instance(config, layout, requests, horizon);
  out.model = build_model(out.instance);
  auto& a = out.assignment;
  const auto W = config.grid_width;
  const auto L = static_cast<std::size_t>(config.block_count());
  const auto H = static_cast<std::size_t>(horizon);
  std::vector<std::int64_t> delta(L * (H + 1), 0);  // net change of idle count entering t
  auto net = [&](std::int32_t v, TimeUnit t) -> std::int64_t& {
    return delta[static_cast<std::size_t>(v) * (H + 1) + static_cast<std::size_t>(t)];
  };

  for (const auto& [id, o] : outcomes) {
    const Event& e = *o.event;
    const std::int64_t v = block_index(e.origin, W), k = block_index(e.destination, W);
    switch (e.type) {
      case EventType::LostSale:
        a[VariableIndex{Family::w, {id, v, e.t}}] = 1;
        break;
      case EventType::ServedSameLocation:
        a[VariableIndex{Family::x, {v, id, k, e.t}}] = 1;
        net(static_cast<std::int32_t>(v), e.t + 1) -= 1;
        net(static_cast<std::int32_t>(v), o.back) += 1;
        break;
      case EventType::ServedCrossLocation: {
        const std::int64_t u = block_index(e.facility, W);
        a[VariableIndex{Family::y, {id, v, e.vehicle, u, k, e.t}}] = 1;
        a[VariableIndex{Family::z, {e.vehicle, k, u, o.back}}] = 1;
        net(static_cast<std::int32_t>(u), e.t + 1) -= 1;
        net(static_cast<std::int32_t>(u), o.back) += 1;
        break;
      }
      case EventType::FacilityOpenTick: break;
    }
  }

  for (std::size_t i = 0; i < layout.size(); ++i) {
    const std::int64_t u = block_index(layout.facilities[i], W);
    for (TimeUnit t = 0; t < horizon; ++t) a[VariableIndex{Family::f, {u, t}}] = 1;
  }
  for (std::size_t v = 0; v < L; ++v) {
    std::int64_t idle = static_cast<std::int64_t>(out.instance.vehicle_pools[v].size());
    for (TimeUnit t = 0; t < horizon; ++t) {
      idle += net(static_cast<std::int32_t>(v), t);
      if (idle != 0) a[VariableIndex{Family::n, {static_cast<std::int64_t>(v), t}}] = idle;
    }
  }
  complete_auxiliaries(out.model, a);
  return out;
}

/// Convenience overload for a finished simulation.
[[nodiscard]] inline EncodedDay encode_simulation(const ScenarioConfig& config, const FacilityLayout& layout,
                                                  std::span<const CustomerRequest> requests, const DayResult& day) {
  return encode_simulation(config, layout, requests, day.log);
}

}  // namespace avpool::milp

#endif  // AVPOOL_MILP_ENCODE_HPP
