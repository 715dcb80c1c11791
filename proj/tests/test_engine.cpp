#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "avpool/engine.hpp"
#include "support.hpp"

namespace avpool {
namespace {

CustomerRequest customer(CustomerId id, GridCoord o, GridCoord d, TimeUnit t, Blocks patience) {
  return CustomerRequest{id, o, d, t, patience};
}

ScenarioConfig small_config(std::int32_t fleet, CostParams costs = {50, 5, 0}) {
  ScenarioConfig c;
  c.fleet_size = fleet;
  c.time_units_per_day = 30;
  c.costs = costs;
  return c;
}

TEST(Match, IdleVehicleOnCustomerBlock) {
  const auto s = initial_state(FacilityLayout{{{2, 2}, {2, 3}}, {1, 1}});
  EXPECT_EQ(match_customer(s, customer(0, {2, 3}, {0, 0}, 0, 3)), (MatchDecision{MatchKind::SameLocation, 1, 0}));
}

TEST(Match, NearestTooFarIsLost) {
  const auto s = initial_state(FacilityLayout{{{0, 0}}, {1}});
  EXPECT_EQ(match_customer(s, customer(0, {2, 3}, {0, 0}, 0, 3)).kind, MatchKind::Lost);
}

TEST(Match, NearestWithinRadiusIsCrossLocation) {
  const auto s = initial_state(FacilityLayout{{{0, 0}, {2, 1}}, {1, 1}});
  EXPECT_EQ(match_customer(s, customer(0, {2, 3}, {0, 0}, 0, 3)), (MatchDecision{MatchKind::CrossLocation, 1, 2}));
}

TEST(Match, NoIdleVehicleIsLost) {
  const auto s = initial_state(FacilityLayout{{{2, 3}}, {0}});
  EXPECT_EQ(match_customer(s, customer(0, {2, 3}, {0, 0}, 0, 3)).kind, MatchKind::Lost);
}

TEST(Match, EquidistantFacilitiesBreakTiesRowMajor) {
  // All three are two blocks away; (3,1) is first in row-major order.
  const auto s = initial_state(FacilityLayout{{{4, 2}, {2, 4}, {3, 1}}, {1, 1, 1}});
  const auto m = match_customer(s, customer(0, {3, 3}, {0, 0}, 0, 5));
  EXPECT_EQ(m.kind, MatchKind::CrossLocation);
  EXPECT_EQ(s.open_facilities[m.facility], (GridCoord{3, 1}));
}

TEST(Match, WrongClockIsAContractViolation) {
  const auto s = initial_state(FacilityLayout{{{0, 0}}, {1}});
  EXPECT_THROW((void)match_customer(s, customer(0, {0, 0}, {1, 0}, 4, 3)), ContractViolation);
}

TEST(Step, SameLocationRoundTripCost) {
  Simulator sim(small_config(1), FacilityLayout{{{1, 1}}, {1}});
  sim.step({customer(0, {1, 1}, {1, 4}, 0, 3)});
  EXPECT_EQ(sim.ledger().travel_cost, 30);
  EXPECT_EQ(sim.state().vehicles[0].available_at, 6);
}

TEST(Step, CrossLocationThreeLegCostAndBusyTime) {
  // d_uv = 2, d_vk = 3, d_ku = 5.
  Simulator sim(small_config(1), FacilityLayout{{{0, 0}}, {1}});
  sim.step({customer(0, {2, 0}, {2, 3}, 0, 3)});
  EXPECT_EQ(sim.ledger().travel_cost, 50);
  EXPECT_EQ(sim.state().vehicles[0].available_at, 10);
  for (TimeUnit t = 1; t < 10; ++t) {
    sim.step({});
    EXPECT_FALSE(sim.state().vehicles[0].idle()) << t;
  }
  sim.step({});
  EXPECT_TRUE(sim.state().vehicles[0].idle());
}

TEST(Step, PhaseTimeline) {
  Simulator sim(small_config(1), FacilityLayout{{{0, 0}}, {1}});
  sim.step({customer(0, {2, 0}, {2, 3}, 0, 3)});
  EXPECT_EQ(sim.state().vehicles[0].status, VehicleStatus{TravelingToCustomer{2}});
  sim.step({});
  sim.step({});  // t=2 reaches the customer
  EXPECT_EQ(sim.state().vehicles[0].status, VehicleStatus{Serving{5}});
  for (int i = 0; i < 3; ++i) sim.step({});
  EXPECT_EQ(sim.state().vehicles[0].status, VehicleStatus{ReturningToFacility{10}});
}

TEST(Step, LostSaleAndFacilityCharges) {
  Simulator lost(small_config(1), FacilityLayout{{{0, 0}}, {1}});
  lost.step({customer(0, {6, 6}, {0, 0}, 0, 3)});
  EXPECT_EQ(lost.ledger().lost_sale_cost, 50);

  auto c = small_config(49);
  Simulator nine(c, canonical_layout(9, c));
  nine.step({});
  EXPECT_EQ(nine.ledger().facility_cost, 0);

  c.costs.facility_open_per_time_unit = 3;
  Simulator charged(c, canonical_layout(9, c));
  charged.step({});
  EXPECT_EQ(charged.ledger().facility_cost, 27);
}

TEST(Step, LessPatientCustomerGoesFirst) {
  Simulator sim(small_config(1), FacilityLayout{{{1, 1}}, {1}});
  sim.step({customer(0, {1, 1}, {3, 3}, 0, 5), customer(1, {1, 1}, {0, 0}, 0, 0)});
  ASSERT_EQ(sim.log().events.size(), 3u);
  EXPECT_EQ(sim.log().events[0].type, EventType::ServedSameLocation);
  EXPECT_EQ(sim.log().events[0].customer, 1);
  EXPECT_EQ(sim.log().events[1].type, EventType::LostSale);
  EXPECT_EQ(sim.log().events[1].customer, 0);
}

TEST(Step, LowestIdIdleVehicleIsDispatched) {
  Simulator sim(small_config(3), FacilityLayout{{{0, 0}}, {3}});
  sim.step({customer(0, {0, 0}, {0, 1}, 0, 0), customer(1, {0, 0}, {0, 1}, 0, 0)});
  EXPECT_EQ(sim.log().events[0].vehicle, 0);
  EXPECT_EQ(sim.log().events[1].vehicle, 1);
  sim.step({});
  sim.step({customer(2, {0, 0}, {0, 1}, 2, 0)});  // vehicle 0 is home again at t=2
  const auto& events = sim.log().events;
  const auto served = std::find_if(events.rbegin(), events.rend(),
                                   [](const Event& e) { return e.type == EventType::ServedSameLocation; });
  ASSERT_NE(served, events.rend());
  EXPECT_EQ(served->customer, 2);
  EXPECT_EQ(served->vehicle, 0);
}

TEST(Step, WrongClockIsAContractViolation) {
  Simulator sim(small_config(1), FacilityLayout{{{0, 0}}, {1}});
  EXPECT_THROW(sim.step({customer(0, {0, 0}, {1, 1}, 1, 3)}), ContractViolation);
}

TEST(Simulator, DispatchOutsideRadiusIsRefused) {
  Simulator sim(small_config(1), FacilityLayout{{{0, 0}}, {1}});
  sim.begin_time_unit();
  EXPECT_THROW(sim.dispatch(customer(0, {3, 3}, {0, 0}, 0, 2), 0), ContractViolation);
  EXPECT_THROW(sim.dispatch(customer(0, {0, 0}, {1, 1}, 0, 2), 0, 5), ContractViolation);
}

TEST(RunDay, NoRequestsChargesOnlyFacilities) {
  auto c = small_config(49, {50, 1, 7});
  const auto day = run_day(c, canonical_layout(4, c), {});
  EXPECT_EQ(day.ledger, (CostLedger{0, 0, 7 * 4 * 30, 7 * 4 * 30}));
}

TEST(RunDay, SingleCoLocatedTrip) {
  auto c = small_config(1, {50, 1, 0});
  const std::vector<CustomerRequest> r{customer(0, {2, 2}, {2, 3}, 0, 3)};
  EXPECT_EQ(run_day(c, FacilityLayout{{{2, 2}}, {1}}, r).ledger.total, 2);
}

TEST(RunDay, TripsRunningPastTheDayFinishWithoutFacilityCharge) {
  auto c = small_config(1, {50, 1, 1});
  c.time_units_per_day = 3;
  const std::vector<CustomerRequest> r{customer(0, {0, 0}, {6, 6}, 2, 3)};
  std::vector<TimeUnit> clocks;
  const auto day = run_day(c, FacilityLayout{{{0, 0}}, {1}}, r, true, [&](const Simulator& s) { clocks.push_back(s.clock()); });
  EXPECT_EQ(day.ledger, (CostLedger{0, 24, 3, 27}));
  EXPECT_EQ(clocks.back(), 2 + 24);
}

TEST(RunDay, InvariantsOnRandomDays) {
  std::mt19937_64 gen(2718);
  for (int i = 0; i < 200; ++i) {
    const auto c = testing::random_config(gen, i % 3 != 0);
    const auto layout = c.fleet_size == 0 ? FacilityLayout{{{0, 0}}, {0}} : testing::random_layout_for(gen, c);
    const auto demand = generate_day_demand(c, gen(), 0);
    ASSERT_EQ(testing::check_day_invariants(c, layout, demand), "") << "case " << i;
  }
}

TEST(RunDay, DeterministicAndIndependentOfEventRecording) {
  ScenarioConfig c;
  const auto layout = canonical_layout(6, c);
  const auto demand = generate_day_demand(c, 17, 4);
  const auto a = run_day(c, layout, demand);
  const auto b = run_day(c, layout, demand);
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.ledger, b.ledger);
  EXPECT_EQ(run_day(c, layout, demand, false).ledger, a.ledger);
}

TEST(RunScenario, CardinalityDeterminismAndZeroRates) {
  ScenarioConfig c;
  const auto layout = canonical_layout(9, c);
  const auto r = run_scenario(c, layout, 100, 3);
  EXPECT_EQ(r.days.size(), 100u);
  EXPECT_EQ(run_scenario(c, layout, 100, 3).totals, r.totals);
  Money sum = 0;
  for (const auto& d : r.days) sum += d.total;
  EXPECT_EQ(r.mean_total(), Rational(sum, 100));

  c.costs = {0, 0, 0};
  const auto zero = run_scenario(c, layout, 10, 3);
  for (const auto& d : zero.days) EXPECT_EQ(d, CostLedger{});
  EXPECT_THROW((void)run_scenario(c, layout, 0, 3), InputError);
}

TEST(EventCsv, EmptyCellsForFieldsThatDoNotApply) {
  EventLog log;
  log.push(Event{EventType::LostSale, 4, -1, {}, {1, 2}, {3, 4}, 9});
  log.push(Event{EventType::FacilityOpenTick, -1, -1, {5, 6}, {}, {}, 9});
  log.push(Event{EventType::ServedCrossLocation, 5, 2, {0, 1}, {1, 2}, {3, 4}, 10});
  std::ostringstream os;
  write_event_csv(os, log);
  EXPECT_EQ(os.str(), std::string(kEventCsvHeader) +
                          "\nlost_sale,4,,,,1,2,3,4,9\n"
                          "facility_open_tick,,,5,6,,,,,9\n"
                          "served_cross_location,5,2,0,1,1,2,3,4,10\n");
}

}  // namespace
}  // namespace avpool
