#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"

namespace qrapnc {

enum class TightSide { lower, upper };

struct TightConstraint {
  std::size_t prefix;  // 1-based prefix length
  TightSide side;
};

struct FeasibilityReport {
  double max_bound_violation = 0.0;   // max_i max(l_i - x_i, x_i - u_i)
  double max_nested_violation = 0.0;  // max_k max(L_k - S_k, S_k - U_k); 0 when n = 1
  double resource_residual = 0.0;     // |S_n - R|
};

struct ExchangeReport {
  // Smallest objective growth rate over all admissible pairwise transfers;
  // negative means a strictly improving move exists. +inf when the solution
  // is clamped so hard that no transfer is admissible.
  double worst_rate = std::numeric_limits<double>::infinity();
  std::size_t from = SIZE_MAX;
  std::size_t to = SIZE_MAX;
};

struct VerificationReport {
  FeasibilityReport feasibility;
  ExchangeReport exchange;
  double tolerance = 0.0;
  bool feasible = false;
  bool optimal = false;
  std::vector<TightConstraint> tight;
};

inline double default_tolerance(const QrapNcInstance& inst) {
  double scale = std::max(1.0, std::abs(inst.base.resource));
  for (double v : inst.prefix_upper) scale = std::max(scale, std::abs(v));
  return 1e-7 * scale;
}

inline FeasibilityReport check_feasibility(const QrapNcInstance& inst,
                                           std::span<const double> x) {
  const std::size_t n = inst.size();
  if (x.size() != n) throw ValidationError("solution length does not match instance");
  FeasibilityReport rep;
  rep.max_bound_violation = -std::numeric_limits<double>::infinity();
  rep.max_nested_violation = (n > 1) ? -std::numeric_limits<double>::infinity() : 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.max_bound_violation = std::max(
        {rep.max_bound_violation, inst.base.lower[i] - x[i], x[i] - inst.base.upper[i]});
    s += x[i];
    if (i + 1 < n) {
      rep.max_nested_violation =
          std::max({rep.max_nested_violation, inst.prefix_lower[i] - s,
                    s - inst.prefix_upper[i]});
    }
  }
  rep.resource_residual = std::abs(s - inst.base.resource);
  return rep;
}

// Pairwise transfer test. Moving mass between variables i < k changes every
// prefix sum in between, so a transfer is admissible only when the moved
// variable bounds and all in-between windows have slack. At an optimum no
// admissible transfer may reduce the objective, i.e. every admissible rate
// must be >= -tol.
inline ExchangeReport check_exchange_optimality(const QrapNcInstance& inst,
                                                std::span<const double> x, double tol) {
  const std::size_t n = inst.size();
  if (x.size() != n) throw ValidationError("solution length does not match instance");
  ExchangeReport rep;
  std::vector<double> s(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run += x[i];
    s[i] = run;
  }
  const auto& a = inst.base.weight;
  const auto& l = inst.base.lower;
  const auto& u = inst.base.upper;
  for (std::size_t i = 0; i < n; ++i) {
    const bool can_shrink_i = x[i] > l[i] + tol;
    const bool can_grow_i = x[i] < u[i] - tol;
    if (!can_shrink_i && !can_grow_i) continue;
    double slack_lo = std::numeric_limits<double>::infinity();
    double slack_hi = std::numeric_limits<double>::infinity();
    for (std::size_t k = i + 1; k < n; ++k) {
      slack_lo = std::min(slack_lo, s[k - 1] - inst.prefix_lower[k - 1]);
      slack_hi = std::min(slack_hi, inst.prefix_upper[k - 1] - s[k - 1]);
      // forward: i gives to k, prefix sums in between drop
      if (can_shrink_i && x[k] < u[k] - tol && slack_lo > tol) {
        const double rate = x[k] / a[k] - x[i] / a[i];
        if (rate < rep.worst_rate) {
          rep.worst_rate = rate;
          rep.from = i;
          rep.to = k;
        }
      }
      // backward: k gives to i, prefix sums in between rise
      if (can_grow_i && x[k] > l[k] + tol && slack_hi > tol) {
        const double rate = x[i] / a[i] - x[k] / a[k];
        if (rate < rep.worst_rate) {
          rep.worst_rate = rate;
          rep.from = k;
          rep.to = i;
        }
      }
    }
  }
  return rep;
}

// Prefix windows the solution sits on. A pinned window (both sides within
// tol) is reported once, as lower.
inline std::vector<TightConstraint> tight_constraints(const QrapNcInstance& inst,
                                                      std::span<const double> x, double tol) {
  const std::size_t n = inst.size();
  if (x.size() != n) throw ValidationError("solution length does not match instance");
  std::vector<TightConstraint> out;
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    s += x[k];
    if (std::abs(s - inst.prefix_lower[k]) <= tol)
      out.push_back({k + 1, TightSide::lower});
    else if (std::abs(s - inst.prefix_upper[k]) <= tol)
      out.push_back({k + 1, TightSide::upper});
  }
  return out;
}

// (max componentwise absolute diff, max componentwise relative diff)
inline std::pair<double, double> compare_solutions(std::span<const double> a,
                                                   std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("solution lengths differ");
  double abs_diff = 0.0, rel_diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    abs_diff = std::max(abs_diff, d);
    rel_diff = std::max(rel_diff, d / std::max({1.0, std::abs(a[i]), std::abs(b[i])}));
  }
  return {abs_diff, rel_diff};
}

inline VerificationReport verify_solution(const QrapNcInstance& inst,
                                          std::span<const double> x, double tol) {
  VerificationReport rep;
  rep.tolerance = tol;
  rep.feasibility = check_feasibility(inst, x);
  rep.feasible = rep.feasibility.max_bound_violation <= tol &&
                 rep.feasibility.max_nested_violation <= tol &&
                 rep.feasibility.resource_residual <= tol;
  rep.exchange = check_exchange_optimality(inst, x, tol);
  rep.optimal = rep.feasible && rep.exchange.worst_rate >= -tol;
  rep.tight = tight_constraints(inst, x, tol);
  return rep;
}

inline VerificationReport verify_solution(const QrapNcInstance& inst,
                                          std::span<const double> x) {
  return verify_solution(inst, x, default_tolerance(inst));
}

}  // namespace qrapnc
