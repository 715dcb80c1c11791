#include <gtest/gtest.h>

#include "avpool/milp/encode.hpp"
#include "avpool/oracle.hpp"
#include "support.hpp"

namespace avpool {
namespace {

TinyInstance one_customer(GridCoord facility, CustomerRequest r, CostParams costs) {
  TinyInstance inst;
  auto& c = inst.config;
  c.grid_width = c.grid_height = 3;
  c.facility_capacity = 9;
  c.time_units_per_day = 6;
  c.fleet_size = 1;
  c.customers_per_day = 3;
  c.costs = costs;
  inst.layout = FacilityLayout{{facility}, {1}};
  inst.customers = {r};
  return inst;
}

TEST(Oracle, ServesWhenServingIsCheaper) {
  const auto inst = one_customer({1, 1}, {0, {1, 1}, {1, 2}, 0, 2}, {50, 1, 0});
  EXPECT_EQ(exact_min_cost(inst).cost(), 2);
  EXPECT_EQ(heuristic_day(inst).ledger.total, 2);
}

TEST(Oracle, RejectsWhenTheTripCostsMoreThanTheSale) {
  // Round trip (0,0) -> (1,1) -> (2,1) -> (0,0): 2 + 1 + 3 blocks at K2 = 5.
  const auto inst = one_customer({0, 0}, {0, {1, 1}, {2, 1}, 0, 4}, {1, 5, 0});
  const auto best = exact_min_cost(inst);
  EXPECT_EQ(best.cost(), 1);
  EXPECT_EQ(best.trace.count(EventType::LostSale), 1u);
  EXPECT_EQ(heuristic_day(inst).ledger.total, 30);
}

TEST(Oracle, StrategicRejectionSavesTheVehicle) {
  // The first customer would tie up the only vehicle when a more valuable
  // same-block customer arrives; the heuristic serves greedily.
  auto inst = one_customer({0, 0}, {0, {2, 0}, {2, 2}, 0, 2}, {20, 1, 0});
  inst.customers.push_back({1, {0, 0}, {0, 1}, 1, 0});
  EXPECT_EQ(heuristic_day(inst).ledger.total, 8 + 20);
  EXPECT_EQ(exact_min_cost(inst).cost(), 20 + 2);
}

TEST(Oracle, CountsEveryLeaf) {
  auto inst = one_customer({0, 0}, {0, {0, 0}, {1, 0}, 0, 2}, {5, 1, 0});
  inst.config.fleet_size = 2;
  inst.layout = FacilityLayout{{{0, 0}, {1, 0}}, {1, 1}};
  // Each of the two facilities is within reach, plus reject.
  EXPECT_EQ(exact_min_cost(inst).leaves, 3u);
}

TEST(Oracle, RefusesLargeInstances) {
  auto inst = one_customer({0, 0}, {0, {0, 0}, {1, 0}, 0, 2}, {5, 1, 0});
  inst.config.time_units_per_day = 7;
  EXPECT_THROW((void)exact_min_cost(inst), InputError);
}

TEST(Oracle, NeverWorseThanTheHeuristic) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto inst = random_tiny_instance(9, i);
    ASSERT_LE(exact_min_cost(inst).cost(), heuristic_day(inst).ledger.total) << "instance " << i;
  }
}

TEST(Oracle, InvariantUnderRelabelingCustomers) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto inst = random_tiny_instance(4, i);
    const auto base = exact_min_cost(inst).cost();
    for (auto& r : inst.customers) r.id = 100 - r.id;
    ASSERT_EQ(exact_min_cost(inst).cost(), base) << "instance " << i;
  }
}

TEST(Oracle, OptimalTraceEncodesFeasibly) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto inst = random_tiny_instance(12, i);
    const auto best = exact_min_cost(inst);
    ASSERT_EQ(testing::cost_from_log(best.trace, inst.config.costs), best.ledger);
    const auto enc = milp::encode_simulation(inst.config, inst.layout, inst.customers, best.trace);
    const auto report = milp::validate_solution(enc.model, enc.assignment);
    ASSERT_TRUE(report.feasible) << "instance " << i;
    ASSERT_EQ(report.objective, Rational(best.cost())) << "instance " << i;
  }
}

TEST(Oracle, RandomInstancesAreDeterministicAndInBounds) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto a = random_tiny_instance(1, i);
    ASSERT_NO_THROW(validate(a));
    const auto b = random_tiny_instance(1, i);
    ASSERT_EQ(a.customers, b.customers);
    ASSERT_EQ(a.layout, b.layout);
  }
}

TEST(CompareWithOracle, GapIsNeverNegative) {
  const auto s = compare_with_oracle(0, 100);
  EXPECT_EQ(s.instances, 100u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_GE(s.min_gap, 0);
  EXPECT_GE(s.optimal, 1u);
  EXPECT_LE(s.optimal, s.instances);
}

}  // namespace
}  // namespace avpool
