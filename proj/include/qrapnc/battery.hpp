#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"

namespace qrapnc {

// Household battery smoothing a consumption profile. Powers in W, energies
// in Wh, intervals in hours. charge_min is typically negative (discharge).
struct BatteryScenario {
  std::vector<double> base_power;  // p_i: house load per interval
  double interval_hours = 0.25;
  double charge_min = 0.0;  // X_min
  double charge_max = 0.0;  // X_max
  double capacity = 0.0;    // D
  double soc_start = 0.0;
  double soc_end = 0.0;
};

inline BatteryScenario validate_scenario(BatteryScenario s) {
  if (s.base_power.empty()) throw ValidationError("profile is empty");
  detail::check_finite(s.base_power, "p");
  if (!(s.interval_hours > 0.0)) throw ValidationError("dt not positive");
  if (!(s.capacity > 0.0)) throw ValidationError("cap not positive");
  if (s.charge_min > s.charge_max) throw ValidationError("x_min > x_max");
  if (s.soc_start < 0.0 || s.soc_start > s.capacity)
    throw ValidationError("soc_start outside [0, cap]");
  if (s.soc_end < 0.0 || s.soc_end > s.capacity)
    throw ValidationError("soc_end outside [0, cap]");
  return s;
}

// Battery sizes used in the experiments; 15-minute intervals, state of
// charge starting and ending at the same fraction of capacity.
inline BatteryScenario battery_preset(std::string_view name, std::vector<double> profile,
                                      double soc_frac) {
  if (soc_frac < 0.0 || soc_frac > 1.0) throw ValidationError("soc fraction outside [0, 1]");
  BatteryScenario s;
  s.base_power = std::move(profile);
  s.interval_hours = 0.25;
  if (name == "small") {
    s.charge_min = -4.0e3;
    s.charge_max = 4.0e3;
    s.capacity = 8.0e4;
  } else if (name == "medium") {
    s.charge_min = -2.0e4;
    s.charge_max = 2.0e4;
    s.capacity = 4.0e5;
  } else if (name == "large") {
    s.charge_min = -3.6e4;
    s.charge_max = 3.6e4;
    s.capacity = 7.2e5;
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  s.soc_start = s.soc_end = soc_frac * s.capacity;
  return validate_scenario(std::move(s));
}

struct BatteryMapping {
  QrapNcInstance instance;
  std::vector<double> power_prefix;  // running sums of p_i, offset applied to windows
};

// Flatten-the-grid-load formulation: the decision variable per interval is
// the total grid draw y_i = p_i + x_i, minimizing sum y_i^2 subject to the
// battery's rate box and the state-of-charge corridor, which turns into
// nested bounds on prefix sums of y.
inline BatteryMapping battery_to_qrapnc(const BatteryScenario& scenario) {
  const BatteryScenario s = validate_scenario(scenario);
  const std::size_t n = s.base_power.size();
  BatteryMapping map;
  map.power_prefix.resize(n);
  QrapNcInstance& q = map.instance;
  q.base.weight.assign(n, 1.0);
  q.base.lower.resize(n);
  q.base.upper.resize(n);
  q.prefix_lower.resize(n - 1);
  q.prefix_upper.resize(n - 1);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q.base.lower[i] = s.base_power[i] + s.charge_min;
    q.base.upper[i] = s.base_power[i] + s.charge_max;
    run += s.base_power[i];
    map.power_prefix[i] = run;
    if (i + 1 < n) {
      q.prefix_lower[i] = (0.0 - s.soc_start) / s.interval_hours + run;
      q.prefix_upper[i] = (s.capacity - s.soc_start) / s.interval_hours + run;
    }
  }
  q.base.resource = (s.soc_end - s.soc_start) / s.interval_hours + run;
  return map;
}

struct BatterySchedule {
  std::vector<double> charge;              // x_i in W; negative discharges
  std::vector<double> soc;                 // Wh after each interval
  std::vector<std::size_t> soc_violations; // intervals whose soc leaves [0, cap] beyond tol
};

// Map a grid-draw solution y back to battery terms and check the corridor.
inline BatterySchedule battery_from_solution(const BatteryScenario& scenario,
                                             std::span<const double> y, double tol) {
  const BatteryScenario s = validate_scenario(scenario);
  const std::size_t n = s.base_power.size();
  if (y.size() != n) throw ValidationError("solution length does not match profile");
  BatterySchedule out;
  out.charge.resize(n);
  out.soc.resize(n);
  double soc = s.soc_start;
  for (std::size_t i = 0; i < n; ++i) {
    out.charge[i] = y[i] - s.base_power[i];
    soc += s.interval_hours * out.charge[i];
    out.soc[i] = soc;
    if (soc < -tol || soc > s.capacity + tol) out.soc_violations.push_back(i);
  }
  return out;
}

}  // namespace qrapnc
