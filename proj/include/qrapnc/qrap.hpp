#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"

namespace qrapnc {

enum class BreakpointKind : std::uint8_t { lower, upper };

// Multiplier value at which variable `index` enters (lower, l_i/a_i) or
// leaves (upper, u_i/a_i) the interior of its box.
struct Breakpoint {
  double value;
  std::uint32_t index;
  BreakpointKind kind;
};

enum class SweepDirection { ascending, descending };

// x_i as a function of the multiplier.
inline double lagrangian_point(double weight, double lower, double upper, double delta) {
  return std::clamp(weight * delta, lower, upper);
}

struct QrapSolution {
  std::vector<double> x;
  double multiplier = 0.0;
};

namespace detail {

inline std::vector<Breakpoint> sorted_breakpoints(const QrapInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<Breakpoint> bps;
  bps.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::uint32_t>(i);
    bps.push_back({inst.lower[i] / inst.weight[i], idx, BreakpointKind::lower});
    bps.push_back({inst.upper[i] / inst.weight[i], idx, BreakpointKind::upper});
  }
  std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.kind != b.kind) return a.kind == BreakpointKind::lower;
    return a.index < b.index;
  });
  return bps;
}

inline double sweep_tol(double target) { return 1e-12 * std::max(1.0, std::abs(target)); }

// One pass over pre-sorted breakpoints resolving each target in turn.
// Targets must be ordered in sweep direction. `p` starts at the fully
// clamped sum for the given direction and `q` at zero.
template <bool Ascending>
inline void sweep_targets(const QrapInstance& inst, const std::vector<Breakpoint>& bps,
                          std::span<const double> targets, std::span<double> multipliers) {
  double p = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i)
    p += Ascending ? inst.lower[i] : inst.upper[i];
  double q = 0.0;
  std::size_t pos = 0;  // next breakpoint, in sweep order
  const std::size_t m = bps.size();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double target = targets[t];
    const double tol = sweep_tol(target);
    bool resolved = false;
    while (pos < m) {
      const Breakpoint& bp = Ascending ? bps[pos] : bps[m - 1 - pos];
      const double z = p + q * bp.value;
      if (std::abs(z - target) <= tol) {
        multipliers[t] = bp.value;
        resolved = true;
        break;
      }
      if (Ascending ? (z > target) : (z < target)) {
        if (q <= 0.0)
          throw InternalError("sweep bracketed target " + std::to_string(t) +
                              " with no interior weight");
        multipliers[t] = (target - p) / q;
        resolved = true;
        break;
      }
      // Move past this breakpoint: the variable switches between clamped
      // and interior, shifting the affine pieces of z.
      const double l = inst.lower[bp.index];
      const double u = inst.upper[bp.index];
      const double a = inst.weight[bp.index];
      const bool opens = Ascending == (bp.kind == BreakpointKind::lower);
      if (opens) {
        p -= Ascending ? l : u;
        q += a;
      } else {
        p += Ascending ? u : l;
        q -= a;
      }
      ++pos;
    }
    if (!resolved) {
      // All breakpoints consumed: z is constant at the opposite clamped sum.
      if (std::abs(p - target) <= tol && m > 0) {
        multipliers[t] = (Ascending ? bps[m - 1] : bps[0]).value;
      } else {
        throw InternalError("sweep exhausted breakpoints before target " + std::to_string(t));
      }
    }
  }
}

}  // namespace detail

// Single-target solve by breakpoint sweep. Both directions give the same
// solution; the direction only changes which end the scan starts from.
inline QrapSolution solve_qrap(const QrapInstance& inst,
                               SweepDirection dir = SweepDirection::ascending) {
  const std::size_t n = inst.size();
  double sum_l = 0.0, sum_u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_l += inst.lower[i];
    sum_u += inst.upper[i];
  }
  const double r = inst.resource;
  const double tol = detail::sweep_tol(r);
  if (r < sum_l - tol || r > sum_u + tol)
    throw InfeasibleError("R outside [sum l, sum u]");

  const auto bps = detail::sorted_breakpoints(inst);
  double mult;
  if (dir == SweepDirection::ascending)
    detail::sweep_targets<true>(inst, bps, {&r, 1}, {&mult, 1});
  else
    detail::sweep_targets<false>(inst, bps, {&r, 1}, {&mult, 1});

  QrapSolution sol;
  sol.multiplier = mult;
  sol.x.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.x[i] = lagrangian_point(inst.weight[i], inst.lower[i], inst.upper[i], mult);
  return sol;
}

// Multipliers for several targets in one ascending sweep. Targets must be
// non-decreasing and within [sum l, sum u]; inst.resource is ignored.
inline std::vector<double> solve_qrap_multi(const QrapInstance& inst,
                                            std::span<const double> targets) {
  if (targets.empty()) return {};
  double sum_l = 0.0, sum_u = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    sum_l += inst.lower[i];
    sum_u += inst.upper[i];
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double tol = detail::sweep_tol(targets[t]);
    if (t > 0 && targets[t] < targets[t - 1])
      throw ValidationError("targets not non-decreasing at index " + std::to_string(t));
    if (targets[t] < sum_l - tol || targets[t] > sum_u + tol)
      throw InfeasibleError("target " + std::to_string(t) + " outside [sum l, sum u]");
  }
  const auto bps = detail::sorted_breakpoints(inst);
  std::vector<double> multipliers(targets.size());
  detail::sweep_targets<true>(inst, bps, targets, multipliers);
  return multipliers;
}

}  // namespace qrapnc
