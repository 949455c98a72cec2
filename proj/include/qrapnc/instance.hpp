#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/rng.hpp"

namespace qrapnc {

// Separable quadratic allocation: minimize sum_i x_i^2 / (2 a_i) subject to
// sum_i x_i = resource and lower <= x <= upper.
struct QrapInstance {
  std::vector<double> weight;  // a_i, strictly positive
  std::vector<double> lower;   // l_i
  std::vector<double> upper;   // u_i
  double resource = 0.0;       // R

  std::size_t size() const { return weight.size(); }
};

// QrapInstance plus nested prefix-sum bounds:
//   prefix_lower[k] <= x_0 + ... + x_k <= prefix_upper[k]  for k in [0, n-2].
// The full sum is pinned by base.resource, so there is no bound at k = n-1.
struct QrapNcInstance {
  QrapInstance base;
  std::vector<double> prefix_lower;  // L, length n-1
  std::vector<double> prefix_upper;  // U, length n-1

  std::size_t size() const { return base.size(); }
};

namespace detail {

inline void check_finite(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw ValidationError(std::string(name) + "[" + std::to_string(i) + "] not finite");
  }
}

}  // namespace detail

inline QrapInstance validate(QrapInstance inst) {
  const std::size_t n = inst.size();
  if (n == 0) throw ValidationError("instance has no variables");
  if (inst.lower.size() != n || inst.upper.size() != n)
    throw ValidationError("dimension mismatch: a, l, u must have equal length");
  detail::check_finite(inst.weight, "a");
  detail::check_finite(inst.lower, "l");
  detail::check_finite(inst.upper, "u");
  if (!std::isfinite(inst.resource)) throw ValidationError("R not finite");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inst.weight[i] > 0.0))
      throw ValidationError("a[" + std::to_string(i) + "] not positive");
    if (inst.lower[i] > inst.upper[i])
      throw ValidationError("l[" + std::to_string(i) + "] > u[" + std::to_string(i) + "]");
  }
  return inst;
}

inline QrapNcInstance validate(QrapNcInstance inst) {
  inst.base = validate(std::move(inst.base));
  const std::size_t n = inst.size();
  if (inst.prefix_lower.size() != n - 1)
    throw ValidationError("L must have length n-1");
  if (inst.prefix_upper.size() != n - 1)
    throw ValidationError("U must have length n-1");
  detail::check_finite(inst.prefix_lower, "L");
  detail::check_finite(inst.prefix_upper, "U");
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (inst.prefix_lower[k] > inst.prefix_upper[k])
      throw ValidationError("L[" + std::to_string(k) + "] > U[" + std::to_string(k) + "]");
  }
  return inst;
}

// Forward pass pulling each prefix window inside what the variable bounds
// allow. Does not change the feasible set. Throws InfeasibleError when a
// tightened window inverts or the resource falls outside the final window.
inline QrapNcInstance tighten(QrapNcInstance inst) {
  const std::size_t n = inst.size();
  const auto& l = inst.base.lower;
  const auto& u = inst.base.upper;
  if (n == 1) {
    if (inst.base.resource < l[0] || inst.base.resource > u[0])
      throw InfeasibleError("R outside [l[0], u[0]]");
    return inst;
  }
  auto& L = inst.prefix_lower;
  auto& U = inst.prefix_upper;
  L[0] = std::max(L[0], l[0]);
  U[0] = std::min(U[0], u[0]);
  if (L[0] > U[0]) throw InfeasibleError("tightened window empty at prefix 1");
  for (std::size_t k = 1; k + 1 < n; ++k) {
    L[k] = std::max(L[k], L[k - 1] + l[k]);
    U[k] = std::min(U[k], U[k - 1] + u[k]);
    if (L[k] > U[k])
      throw InfeasibleError("tightened window empty at prefix " + std::to_string(k + 1));
  }
  const double r = inst.base.resource;
  if (r < L[n - 2] + l[n - 1] || r > U[n - 2] + u[n - 1])
    throw InfeasibleError("R outside reachable range of the final prefix");
  return inst;
}

// Relative tolerance used to detect pinned prefixes (L_j == U_j).
inline bool prefix_pinned(double lo, double hi) {
  return std::abs(hi - lo) <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

// Cut a tightened instance at every pinned prefix. Each piece is a standalone
// instance whose resource is the pinned window value minus the amount already
// committed to earlier pieces; inner prefix bounds shift by the same offset.
// Solving the pieces independently and concatenating is equivalent to solving
// the whole. Returns {instance} when nothing is pinned.
inline std::vector<QrapNcInstance> split_on_equal_bounds(const QrapNcInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<QrapNcInstance> pieces;
  std::size_t begin = 0;    // first variable of the current piece
  double committed = 0.0;   // prefix value fixed at the last cut
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!prefix_pinned(inst.prefix_lower[k], inst.prefix_upper[k])) continue;
    QrapNcInstance piece;
    const std::size_t m = k + 1 - begin;
    piece.base.weight.assign(inst.base.weight.begin() + begin, inst.base.weight.begin() + k + 1);
    piece.base.lower.assign(inst.base.lower.begin() + begin, inst.base.lower.begin() + k + 1);
    piece.base.upper.assign(inst.base.upper.begin() + begin, inst.base.upper.begin() + k + 1);
    piece.base.resource = inst.prefix_lower[k] - committed;
    piece.prefix_lower.resize(m - 1);
    piece.prefix_upper.resize(m - 1);
    for (std::size_t t = 0; t + 1 < m; ++t) {
      piece.prefix_lower[t] = inst.prefix_lower[begin + t] - committed;
      piece.prefix_upper[t] = inst.prefix_upper[begin + t] - committed;
    }
    pieces.push_back(std::move(piece));
    committed = inst.prefix_lower[k];
    begin = k + 1;
  }
  if (begin == 0) return {inst};
  QrapNcInstance tail;
  tail.base.weight.assign(inst.base.weight.begin() + begin, inst.base.weight.end());
  tail.base.lower.assign(inst.base.lower.begin() + begin, inst.base.lower.end());
  tail.base.upper.assign(inst.base.upper.begin() + begin, inst.base.upper.end());
  tail.base.resource = inst.base.resource - committed;
  tail.prefix_lower.assign(inst.prefix_lower.begin() + begin, inst.prefix_lower.end());
  tail.prefix_upper.assign(inst.prefix_upper.begin() + begin, inst.prefix_upper.end());
  for (auto& v : tail.prefix_lower) v -= committed;
  for (auto& v : tail.prefix_upper) v -= committed;
  pieces.push_back(std::move(tail));
  return pieces;
}

inline double objective(const QrapInstance& inst, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) s += 0.5 * x[i] * x[i] / inst.weight[i];
  return s;
}

inline double objective(const QrapNcInstance& inst, std::span<const double> x) {
  return objective(inst.base, x);
}

// Random feasible instance, deterministic per (n, seed). Prefix windows come
// from two independent feasible trajectories, so they are already consistent
// with the variable bounds and never need tightening.
inline QrapNcInstance gen_synthetic(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValidationError("instance has no variables");
  std::mt19937_64 eng(seed);
  QrapNcInstance inst;
  inst.base.weight.resize(n);
  inst.base.lower.resize(n);
  inst.base.upper.resize(n);
  inst.prefix_lower.resize(n - 1);
  inst.prefix_upper.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double a = uniform_unit(eng);
    while (a < 1e-9) a = uniform_unit(eng);  // keep weights bounded away from zero
    inst.base.weight[i] = a;
    inst.base.lower[i] = uniform_in(eng, 0.1, 0.5);
    inst.base.upper[i] = uniform_in(eng, 0.5, 0.9);
  }
  double v = 0.0, w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v += uniform_in(eng, inst.base.lower[i], inst.base.upper[i]);
    w += uniform_in(eng, inst.base.lower[i], inst.base.upper[i]);
    if (i + 1 < n) {
      inst.prefix_lower[i] = std::min(v, w);
      inst.prefix_upper[i] = std::max(v, w);
    }
  }
  inst.base.resource = 0.5 * (v + w);
  return inst;
}

}  // namespace qrapnc
