#ifndef AVPOOL_ENGINE_HPP
#define AVPOOL_ENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "avpool/core.hpp"
#include "avpool/demand.hpp"
#include "avpool/layout.hpp"

namespace avpool {

using VehicleId = std::int32_t;
using Rational = boost::rational<std::int64_t>;

// ---------------------------------------------------------------------------
// Vehicle lifecycle

struct Idle {
  friend bool operator==(const Idle&, const Idle&) = default;
};
struct TravelingToCustomer {
  TimeUnit arrival;
  friend bool operator==(const TravelingToCustomer&, const TravelingToCustomer&) = default;
};
/// Customer on board, heading to the destination.
struct Serving {
  TimeUnit dropoff;
  friend bool operator==(const Serving&, const Serving&) = default;
};
struct ReturningToFacility {
  TimeUnit arrival;
  friend bool operator==(const ReturningToFacility&, const ReturningToFacility&) = default;
};

using VehicleStatus = std::variant<Idle, TravelingToCustomer, Serving, ReturningToFacility>;

[[nodiscard]] inline std::optional<TimeUnit> status_deadline(const VehicleStatus& s) {
  return std::visit(
      [](const auto& v) -> std::optional<TimeUnit> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Idle>) return std::nullopt;
        else if constexpr (std::is_same_v<T, Serving>) return v.dropoff;
        else return v.arrival;
      },
      s);
}

/// Trip a busy vehicle is committed to.
struct Trip {
  CustomerId customer = 0;
  GridCoord origin;
  GridCoord destination;
  TimeUnit dispatched = 0;
};

struct Vehicle {
  VehicleId id = 0;
  GridCoord home_facility;
  std::size_t facility_index = 0;
  VehicleStatus status = Idle{};
  TimeUnit available_at = 0;
  std::optional<Trip> trip;

  [[nodiscard]] bool idle() const { return std::holds_alternative<Idle>(status); }
};

/// Vehicle ids are assigned facility by facility in layout order, so the
/// vehicles homed at facility i form one contiguous id range.
[[nodiscard]] inline std::vector<Vehicle> initial_fleet(const FacilityLayout& layout) {
  std::vector<Vehicle> fleet;
  VehicleId next = 0;
  for (std::size_t i = 0; i < layout.size(); ++i)
    for (std::int32_t n = 0; n < layout.initial_vehicles[i]; ++n)
      fleet.push_back(Vehicle{next++, layout.facilities[i], i, Idle{}, 0, std::nullopt});
  return fleet;
}

// ---------------------------------------------------------------------------
// Events and costs

enum class EventType { ServedSameLocation, ServedCrossLocation, LostSale, FacilityOpenTick };

[[nodiscard]] inline const char* to_string(EventType t) {
  switch (t) {
    case EventType::ServedSameLocation: return "served_same_location";
    case EventType::ServedCrossLocation: return "served_cross_location";
    case EventType::LostSale: return "lost_sale";
    case EventType::FacilityOpenTick: return "facility_open_tick";
  }
  return "?";
}

/// Fields not meaningful for a type keep their defaults (-1 ids, zero coords).
struct Event {
  EventType type = EventType::LostSale;
  CustomerId customer = -1;
  VehicleId vehicle = -1;
  GridCoord facility;
  GridCoord origin;
  GridCoord destination;
  TimeUnit t = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventLog {
  std::vector<Event> events;

  void push(const Event& e) { events.push_back(e); }
  [[nodiscard]] std::size_t count(EventType type) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.type == type; }));
  }

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

inline constexpr const char* kEventCsvHeader =
    "event_type,customer_id,vehicle_id,facility_x,facility_y,origin_x,origin_y,dest_x,dest_y,t";

inline void write_event_csv(std::ostream& os, const EventLog& log) {
  os << kEventCsvHeader << '\n';
  for (const auto& e : log.events) {
    const bool has_customer = e.type != EventType::FacilityOpenTick;
    const bool has_vehicle =
        e.type == EventType::ServedSameLocation || e.type == EventType::ServedCrossLocation;
    const bool has_facility = e.type != EventType::LostSale;
    os << to_string(e.type) << ',';
    if (has_customer) os << e.customer;
    os << ',';
    if (has_vehicle) os << e.vehicle;
    os << ',';
    if (has_facility) os << e.facility.x << ',' << e.facility.y;
    else os << ',';
    os << ',';
    if (has_customer) os << e.origin.x << ',' << e.origin.y << ',' << e.destination.x << ',' << e.destination.y;
    else os << ",,,";
    os << ',' << e.t << '\n';
  }
}

struct CostLedger {
  Money lost_sale_cost = 0;
  Money travel_cost = 0;
  Money facility_cost = 0;
  Money total = 0;

  void add_lost_sale(Money m) { lost_sale_cost += m; total += m; }
  void add_travel(Money m) { travel_cost += m; total += m; }
  void add_facility(Money m) { facility_cost += m; total += m; }

  CostLedger& operator+=(const CostLedger& o) {
    lost_sale_cost += o.lost_sale_cost;
    travel_cost += o.travel_cost;
    facility_cost += o.facility_cost;
    total += o.total;
    return *this;
  }

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

inline void write_ledger_json(std::ostream& os, const CostLedger& l) {
  os << "{\"lost_sale_cost\": " << l.lost_sale_cost << ", \"travel_cost\": " << l.travel_cost
     << ", \"facility_cost\": " << l.facility_cost << ", \"total\": " << l.total << "}\n";
}

// ---------------------------------------------------------------------------
// State and matching

struct SystemState {
  TimeUnit clock = 0;
  std::vector<Vehicle> vehicles;
  std::vector<GridCoord> open_facilities;  // layout order
  // Idle vehicle ids per facility, sorted descending so back() is the lowest.
  std::vector<std::vector<VehicleId>> idle;
  // Facility indices sorted row-major by coordinate.
  std::vector<std::size_t> search_order;

  [[nodiscard]] std::int64_t idle_count(std::size_t facility) const {
    return static_cast<std::int64_t>(idle[facility].size());
  }
  [[nodiscard]] std::int64_t total_idle() const {
    std::int64_t n = 0;
    for (const auto& f : idle) n += static_cast<std::int64_t>(f.size());
    return n;
  }
  [[nodiscard]] std::optional<std::size_t> facility_at(const GridCoord& p) const {
    for (std::size_t i = 0; i < open_facilities.size(); ++i)
      if (open_facilities[i] == p) return i;
    return std::nullopt;
  }
};

[[nodiscard]] inline SystemState initial_state(const FacilityLayout& layout) {
  SystemState s;
  s.vehicles = initial_fleet(layout);
  s.open_facilities = layout.facilities;
  s.idle.resize(layout.size());
  for (auto it = s.vehicles.rbegin(); it != s.vehicles.rend(); ++it) s.idle[it->facility_index].push_back(it->id);
  s.search_order.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) s.search_order[i] = i;
  std::sort(s.search_order.begin(), s.search_order.end(),
            [&](std::size_t a, std::size_t b) { return layout.facilities[a] < layout.facilities[b]; });
  return s;
}

enum class MatchKind { SameLocation, CrossLocation, Lost };

struct MatchDecision {
  MatchKind kind = MatchKind::Lost;
  std::size_t facility = 0;  // meaningful unless Lost
  Blocks distance = 0;

  friend bool operator==(const MatchDecision&, const MatchDecision&) = default;
};

/// Heuristic match for one customer against current idle supply: a vehicle
/// parked on the customer's block first, otherwise the nearest facility with
/// an idle vehicle (ties by row-major coordinate) if within the patience
/// radius, otherwise a lost sale.
[[nodiscard]] inline MatchDecision match_customer(const SystemState& state, const CustomerRequest& customer) {
  if (customer.arrival_time != state.clock)
    throw ContractViolation("customer " + std::to_string(customer.id) + " arrives at " +
                            std::to_string(customer.arrival_time) + ", clock is " +
                            std::to_string(state.clock));
  if (auto home = state.facility_at(customer.origin); home && state.idle_count(*home) > 0)
    return {MatchKind::SameLocation, *home, 0};

  std::optional<std::size_t> best;
  Blocks best_distance = 0;
  for (std::size_t f : state.search_order) {
    if (state.idle_count(f) == 0) continue;
    const Blocks d = manhattan_distance(state.open_facilities[f], customer.origin);
    if (!best || d < best_distance) {
      best = f;
      best_distance = d;
    }
  }
  if (!best || best_distance > customer.patience_radius) return {MatchKind::Lost, 0, 0};
  return {MatchKind::CrossLocation, *best, best_distance};
}

/// Priority order within a time unit: least patient first, then by id.
inline void sort_by_priority(std::vector<CustomerRequest>& customers) {
  std::sort(customers.begin(), customers.end(), [](const CustomerRequest& a, const CustomerRequest& b) {
    if (a.patience_radius != b.patience_radius) return a.patience_radius < b.patience_radius;
    return a.id < b.id;
  });
}

// ---------------------------------------------------------------------------
// Simulator

/// Discrete-time simulator of one day. `step` runs the heuristic; the finer
/// grained begin/dispatch/reject/end calls let other policies (the exact
/// oracle) drive the same state machine.
class Simulator {
public:
  Simulator(const ScenarioConfig& config, const FacilityLayout& layout, bool record_events = true)
      : speed_(config.vehicle_speed),
        costs_(config.costs),
        horizon_(config.time_units_per_day),
        fleet_size_(config.fleet_size),
        record_events_(record_events),
        state_(initial_state(layout)) {
    validate(config);
    validate(layout, config);
  }

  [[nodiscard]] const SystemState& state() const { return state_; }
  [[nodiscard]] const EventLog& log() const { return log_; }
  [[nodiscard]] const CostLedger& ledger() const { return ledger_; }
  [[nodiscard]] TimeUnit clock() const { return state_.clock; }
  [[nodiscard]] TimeUnit horizon() const { return horizon_; }
  EventLog take_log() { return std::move(log_); }

  /// Completes every phase whose deadline is the current clock.
  void begin_time_unit() {
    for (auto& v : state_.vehicles) {
      while (true) {
        auto deadline = status_deadline(v.status);
        if (!deadline || *deadline != state_.clock) break;
        advance_phase(v);
      }
    }
  }

  /// Sends the given (or lowest-id) idle vehicle of `facility` to `customer`.
  VehicleId dispatch(const CustomerRequest& customer, std::size_t facility,
                     std::optional<VehicleId> vehicle = std::nullopt) {
    check_arrival(customer);
    if (facility >= state_.idle.size()) throw ContractViolation("no such facility");
    auto& pool = state_.idle[facility];
    if (pool.empty()) throw ContractViolation("no idle vehicle at facility");
    auto pos = pool.end() - 1;
    if (vehicle) {
      pos = std::find(pool.begin(), pool.end(), *vehicle);
      if (pos == pool.end()) throw ContractViolation("vehicle is not idle at that facility");
    }
    const GridCoord home = state_.open_facilities[facility];
    const Blocks reach = manhattan_distance(home, customer.origin);
    if (reach > customer.patience_radius) throw ContractViolation("vehicle outside patience radius");

    Vehicle& v = state_.vehicles[static_cast<std::size_t>(*pos)];
    pool.erase(pos);
    const TimeUnit now = state_.clock;
    const Blocks ride = manhattan_distance(customer.origin, customer.destination);
    const Blocks back = manhattan_distance(customer.destination, home);
    v.trip = Trip{customer.id, customer.origin, customer.destination, now};
    v.available_at = now + travel_time_for(reach, speed_) + travel_time_for(ride, speed_) +
                     travel_time_for(back, speed_);
    if (reach == 0) v.status = Serving{now + travel_time_for(ride, speed_)};
    else v.status = TravelingToCustomer{now + travel_time_for(reach, speed_)};

    ledger_.add_travel(costs_.travel_per_block * (reach + ride + back));
    if (record_events_) {
      log_.push(Event{reach == 0 ? EventType::ServedSameLocation : EventType::ServedCrossLocation,
                      customer.id, v.id, home, customer.origin, customer.destination, now});
    }
    return v.id;
  }

  void reject(const CustomerRequest& customer) {
    check_arrival(customer);
    ledger_.add_lost_sale(costs_.lost_sale_per_unit);
    if (record_events_)
      log_.push(Event{EventType::LostSale, customer.id, -1, {}, customer.origin, customer.destination,
                      state_.clock});
  }

  /// Heuristic resolution of one customer.
  MatchDecision serve_or_reject(const CustomerRequest& customer) {
    const auto decision = match_customer(state_, customer);
    if (decision.kind == MatchKind::Lost) reject(customer);
    else dispatch(customer, decision.facility);
    return decision;
  }

  /// Charges facility cost for the closing unit (only inside the day) and
  /// advances the clock.
  void end_time_unit() {
    if (state_.clock < horizon_) {
      const auto open = static_cast<Money>(state_.open_facilities.size());
      ledger_.add_facility(costs_.facility_open_per_time_unit * open);
      if (record_events_)
        for (const auto& f : state_.open_facilities)
          log_.push(Event{EventType::FacilityOpenTick, -1, -1, f, {}, {}, state_.clock});
    }
    ++state_.clock;
  }

  /// One full time unit of the heuristic. `arrivals` must all carry the
  /// current clock.
  void step(std::vector<CustomerRequest> arrivals) {
    for (const auto& c : arrivals) check_arrival(c);
    begin_time_unit();
    sort_by_priority(arrivals);
    for (const auto& c : arrivals) serve_or_reject(c);
    end_time_unit();
  }

  [[nodiscard]] bool all_idle() const { return state_.total_idle() == fleet_size_; }

  /// Runs in-flight trips to completion after the day ends.
  void drain() {
    if (state_.clock < horizon_) throw ContractViolation("drain before the end of the day");
    begin_time_unit();
    while (!all_idle()) {
      ++state_.clock;
      begin_time_unit();
    }
  }

  /// Throws ContractViolation if a state invariant is broken.
  void check_invariants() const {
    std::int64_t busy = 0;
    for (const auto& v : state_.vehicles) {
      if (v.idle()) {
        if (v.trip) throw ContractViolation("idle vehicle still holds a trip");
        const auto& pool = state_.idle[v.facility_index];
        if (std::find(pool.begin(), pool.end(), v.id) == pool.end())
          throw ContractViolation("idle vehicle " + std::to_string(v.id) + " missing from its facility");
      } else {
        ++busy;
        if (!v.trip) throw ContractViolation("busy vehicle without a trip");
        if (*status_deadline(v.status) < state_.clock)
          throw ContractViolation("vehicle " + std::to_string(v.id) + " has a deadline in the past");
      }
    }
    if (state_.total_idle() + busy != fleet_size_) throw ContractViolation("vehicle conservation broken");
    for (const auto& pool : state_.idle)
      if (!std::is_sorted(pool.rbegin(), pool.rend())) throw ContractViolation("idle pool out of order");
    if (ledger_.total != ledger_.lost_sale_cost + ledger_.travel_cost + ledger_.facility_cost)
      throw ContractViolation("ledger total out of balance");
  }

private:
  void check_arrival(const CustomerRequest& c) const {
    if (c.arrival_time != state_.clock)
      throw ContractViolation("customer " + std::to_string(c.id) + " stamped " +
                              std::to_string(c.arrival_time) + " at clock " + std::to_string(state_.clock));
  }

  void advance_phase(Vehicle& v) {
    const Trip& trip = *v.trip;
    if (const auto* s = std::get_if<TravelingToCustomer>(&v.status)) {
      v.status = Serving{s->arrival + travel_time(trip.origin, trip.destination, speed_)};
    } else if (const auto* s = std::get_if<Serving>(&v.status)) {
      v.status = ReturningToFacility{s->dropoff + travel_time(trip.destination, v.home_facility, speed_)};
    } else if (std::holds_alternative<ReturningToFacility>(v.status)) {
      v.status = Idle{};
      v.trip.reset();
      auto& pool = state_.idle[v.facility_index];
      pool.insert(std::upper_bound(pool.begin(), pool.end(), v.id, std::greater<>{}), v.id);
    }
  }

  Blocks speed_;
  CostParams costs_;
  TimeUnit horizon_;
  std::int64_t fleet_size_;
  bool record_events_;
  SystemState state_;
  EventLog log_;
  CostLedger ledger_;
};

// ---------------------------------------------------------------------------
// Day and scenario runs

struct DayResult {
  EventLog log;
  CostLedger ledger;
};

using StepObserver = std::function<void(const Simulator&)>;

namespace detail {
/// Requests bucketed by arrival time; validates each against the config.
inline std::vector<std::vector<CustomerRequest>> bucket_by_arrival(const ScenarioConfig& config,
                                                                   std::span<const CustomerRequest> requests) {
  std::vector<std::vector<CustomerRequest>> buckets(static_cast<std::size_t>(config.time_units_per_day));
  for (const auto& r : requests) {
    validate(r, config);
    buckets[static_cast<std::size_t>(r.arrival_time)].push_back(r);
  }
  return buckets;
}
}  // namespace detail

/// Simulates one day from a fresh reset and runs all trips to completion.
/// `observer`, when set, sees the simulator after every time unit.
[[nodiscard]] inline DayResult run_day(const ScenarioConfig& config, const FacilityLayout& layout,
                                       std::span<const CustomerRequest> requests, bool record_events = true,
                                       const StepObserver& observer = {}) {
  Simulator sim(config, layout, record_events);
  auto buckets = detail::bucket_by_arrival(config, requests);
  for (auto& arrivals : buckets) {
    sim.step(std::move(arrivals));
    if (observer) observer(sim);
  }
  sim.drain();
  if (observer) observer(sim);
  return DayResult{sim.take_log(), sim.ledger()};
}

struct ScenarioResult {
  std::vector<CostLedger> days;
  CostLedger totals;

  [[nodiscard]] std::int64_t num_days() const { return static_cast<std::int64_t>(days.size()); }
  [[nodiscard]] Rational mean(Money CostLedger::*field) const {
    return days.empty() ? Rational(0) : Rational(totals.*field, num_days());
  }
  [[nodiscard]] Rational mean_total() const { return mean(&CostLedger::total); }
  [[nodiscard]] Rational mean_lost() const { return mean(&CostLedger::lost_sale_cost); }
  [[nodiscard]] Rational mean_travel() const { return mean(&CostLedger::travel_cost); }
  [[nodiscard]] Rational mean_facility() const { return mean(&CostLedger::facility_cost); }
};

/// Runs `num_days` independent days. Day d draws demand from substream
/// (master_seed, d), so the result depends only on the inputs.
[[nodiscard]] inline ScenarioResult run_scenario(const ScenarioConfig& config, const FacilityLayout& layout,
                                                 std::int64_t num_days, std::uint64_t master_seed) {
  if (num_days < 1) throw InputError("num_days must be >= 1");
  ScenarioResult out;
  out.days.reserve(static_cast<std::size_t>(num_days));
  for (std::int64_t d = 0; d < num_days; ++d) {
    const auto demand = generate_day_demand(config, master_seed, static_cast<std::uint64_t>(d));
    const auto day = run_day(config, layout, demand, /*record_events=*/false);
    out.days.push_back(day.ledger);
    out.totals += day.ledger;
  }
  return out;
}

}  // namespace avpool

#endif  // AVPOOL_ENGINE_HPP
