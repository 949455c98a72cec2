#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qrapnc/battery.hpp"
#include "qrapnc/fast_solver.hpp"
#include "qrapnc/io.hpp"
#include "qrapnc/rng.hpp"
#include "qrapnc/verify.hpp"

using namespace qrapnc;

namespace {

std::vector<double> random_profile(std::size_t n, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 eng(seed);
  std::vector<double> p(n);
  for (auto& v : p) v = uniform_in(eng, lo, hi);
  return p;
}

TEST(Battery, HandMappedInstance) {
  // Two intervals, p = (1, 1), dt = 0.25 h, rates in [-1, 1] W, cap 1 Wh,
  // soc start = end = 0.5 Wh. Grid draw y_i = p_i + x_i in [0, 2];
  // soc corridor on S_1: (0 - 0.5)/0.25 + 1 = -1, (1 - 0.5)/0.25 + 1 = 3;
  // resource: (0.5 - 0.5)/0.25 + 2 = 2.
  BatteryScenario s;
  s.base_power = {1.0, 1.0};
  s.interval_hours = 0.25;
  s.charge_min = -1.0;
  s.charge_max = 1.0;
  s.capacity = 1.0;
  s.soc_start = s.soc_end = 0.5;
  auto map = battery_to_qrapnc(s);
  const auto& q = map.instance;
  ASSERT_EQ(q.size(), 2u);
  EXPECT_DOUBLE_EQ(q.base.weight[0], 1.0);
  EXPECT_DOUBLE_EQ(q.base.lower[0], 0.0);
  EXPECT_DOUBLE_EQ(q.base.upper[0], 2.0);
  ASSERT_EQ(q.prefix_lower.size(), 1u);
  EXPECT_DOUBLE_EQ(q.prefix_lower[0], -1.0);
  EXPECT_DOUBLE_EQ(q.prefix_upper[0], 3.0);
  EXPECT_DOUBLE_EQ(q.base.resource, 2.0);
  EXPECT_DOUBLE_EQ(map.power_prefix[1], 2.0);
}

TEST(Battery, PresetsAreExact) {
  auto small = battery_preset("small", {1.0}, 0.5);
  EXPECT_EQ(small.charge_min, -4.0e3);
  EXPECT_EQ(small.charge_max, 4.0e3);
  EXPECT_EQ(small.capacity, 8.0e4);
  EXPECT_EQ(small.interval_hours, 0.25);
  EXPECT_EQ(small.soc_start, 4.0e4);
  auto medium = battery_preset("medium", {1.0}, 0.25);
  EXPECT_EQ(medium.charge_min, -2.0e4);
  EXPECT_EQ(medium.charge_max, 2.0e4);
  EXPECT_EQ(medium.capacity, 4.0e5);
  EXPECT_EQ(medium.soc_start, 1.0e5);
  auto large = battery_preset("large", {1.0}, 0.5);
  EXPECT_EQ(large.charge_min, -3.6e4);
  EXPECT_EQ(large.charge_max, 3.6e4);
  EXPECT_EQ(large.capacity, 7.2e5);
  EXPECT_THROW(battery_preset("huge", {1.0}, 0.5), ValidationError);
  EXPECT_THROW(battery_preset("small", {1.0}, 1.5), ValidationError);
}

TEST(Battery, ScenarioValidation) {
  BatteryScenario s;
  s.base_power = {};
  s.interval_hours = 0.25;
  s.charge_min = -1;
  s.charge_max = 1;
  s.capacity = 1;
  EXPECT_THROW(validate_scenario(s), ValidationError);
  s.base_power = {1.0};
  s.interval_hours = 0.0;
  EXPECT_THROW(validate_scenario(s), ValidationError);
  s.interval_hours = 0.25;
  s.charge_min = 2.0;
  EXPECT_THROW(validate_scenario(s), ValidationError);
  s.charge_min = -1.0;
  s.soc_start = 5.0;
  EXPECT_THROW(validate_scenario(s), ValidationError);
  s.soc_start = 0.5;
  s.soc_end = -0.1;
  EXPECT_THROW(validate_scenario(s), ValidationError);
  s.soc_end = 0.5;
  EXPECT_NO_THROW(validate_scenario(s));
}

TEST(Battery, ScheduleInvertsMapping) {
  auto profile = random_profile(24, 11, 200.0, 2000.0);
  auto s = battery_preset("small", profile, 0.5);
  auto map = battery_to_qrapnc(s);
  auto sol = solve_fast(map.instance);
  auto sched = battery_from_solution(s, sol.x, 1e-6);
  ASSERT_EQ(sched.charge.size(), s.base_power.size());
  EXPECT_TRUE(sched.soc_violations.empty());
  // charge = y - p, soc integrates charge, and the terminal soc matches.
  double soc = s.soc_start;
  for (std::size_t i = 0; i < sched.charge.size(); ++i) {
    EXPECT_NEAR(sched.charge[i], sol.x[i] - profile[i], 1e-9);
    soc += s.interval_hours * sched.charge[i];
    EXPECT_NEAR(sched.soc[i], soc, 1e-9);
    EXPECT_GE(sched.charge[i], s.charge_min - 1e-6);
    EXPECT_LE(sched.charge[i], s.charge_max + 1e-6);
  }
  EXPECT_NEAR(sched.soc.back(), s.soc_end, 1e-6);
}

TEST(Battery, FlatProfileNeedsNoBattery) {
  // A constant load is already flat; the optimum leaves the battery idle.
  auto s = battery_preset("medium", std::vector<double>(48, 750.0), 0.5);
  auto map = battery_to_qrapnc(s);
  auto sol = solve_fast(map.instance);
  auto sched = battery_from_solution(s, sol.x, 1e-9);
  for (double c : sched.charge) EXPECT_NEAR(c, 0.0, 1e-9);
}

TEST(Battery, SolutionsStayInCorridor) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto profile = random_profile(96, seed, 100.0, 3000.0);
    const double frac = 0.2 + 0.6 * (seed % 4) / 3.0;
    auto s = battery_preset(seed % 2 ? "small" : "large", profile, frac);
    auto map = battery_to_qrapnc(s);
    auto sol = solve_fast(map.instance);
    auto rep = verify_solution(map.instance, sol.x);
    EXPECT_TRUE(rep.feasible) << "seed " << seed;
    EXPECT_TRUE(rep.optimal) << "seed " << seed;
    auto sched = battery_from_solution(s, sol.x, default_tolerance(map.instance));
    EXPECT_TRUE(sched.soc_violations.empty()) << "seed " << seed;
  }
}

TEST(Battery, ViolationListFlagsBadSchedules) {
  BatteryScenario s;
  s.base_power = {1.0, 1.0};
  s.interval_hours = 1.0;
  s.charge_min = -10.0;
  s.charge_max = 10.0;
  s.capacity = 1.0;
  s.soc_start = s.soc_end = 0.5;
  // y = (4, -2): charge (3, -3), soc hits 3.5 then 0.5.
  std::vector<double> y{4.0, -2.0};
  auto sched = battery_from_solution(s, y, 1e-9);
  ASSERT_EQ(sched.soc_violations.size(), 1u);
  EXPECT_EQ(sched.soc_violations[0], 0u);
  std::vector<double> wrong_len{1.0};
  EXPECT_THROW(battery_from_solution(s, wrong_len, 1e-9), ValidationError);
}

TEST(Battery, ScenarioJsonRoundTrip) {
  auto s = battery_preset("large", random_profile(12, 3, 0.0, 100.0), 0.3);
  auto j = scenario_to_json(s);
  auto back = scenario_from_json(j);
  EXPECT_EQ(back.base_power, s.base_power);
  EXPECT_EQ(back.interval_hours, s.interval_hours);
  EXPECT_EQ(back.charge_min, s.charge_min);
  EXPECT_EQ(back.charge_max, s.charge_max);
  EXPECT_EQ(back.capacity, s.capacity);
  EXPECT_EQ(back.soc_start, s.soc_start);
  EXPECT_EQ(back.soc_end, s.soc_end);
}

}  // namespace
