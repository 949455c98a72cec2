#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrapnc/depq.hpp"
#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"
#include "qrapnc/qrap.hpp"
#include "qrapnc/solution.hpp"

namespace qrapnc {

// How a variable's breakpoints move once a step fixes its prefix multipliers:
// fixing kappa pulls lower breakpoints below it up to kappa (the variable can
// never drop below its value at kappa again), and collapses the pair when
// kappa passed the upper breakpoint.
inline double next_lower_breakpoint(double alpha, double beta, double kappa) {
  if (kappa < alpha) return alpha;
  if (kappa < beta) return kappa;
  return beta;
}

inline double next_upper_breakpoint(double alpha, double beta, double lambda) {
  if (lambda > beta) return beta;
  if (lambda > alpha) return lambda;
  return alpha;
}

// Backward recursion filling chi from the recorded multiplier windows: the
// last prefix pins everything, earlier variables use the resource multiplier
// unless their own window forces a bound.
inline std::vector<double> recover_chi(const MultiplierTrace& trace) {
  const std::size_t n = trace.kappa.size();
  if (n == 0 || trace.lambda.size() != n)
    throw ValidationError("trace must hold kappa and lambda of equal nonzero length");
  std::vector<double> chi(n);
  chi[n - 1] = trace.kappa[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) {
    const double next = chi[j + 1];
    if (next <= trace.kappa[j])
      chi[j] = trace.kappa[j];
    else if (next >= trace.lambda[j])
      chi[j] = trace.lambda[j];
    else
      chi[j] = next;
  }
  return chi;
}

// x from per-variable multipliers. The instance must be tightened; the first
// variable's box is its prefix window.
inline std::vector<double> reconstruct_solution(const QrapNcInstance& inst,
                                                std::span<const double> chi) {
  const std::size_t n = inst.size();
  if (chi.size() != n) throw ValidationError("chi length does not match instance");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = inst.base.lower[i];
    double hi = inst.base.upper[i];
    if (i == 0 && n > 1) {
      lo = std::max(lo, inst.prefix_lower[0]);
      hi = std::min(hi, inst.prefix_upper[0]);
    }
    if (i == 0 && n == 1) lo = hi = inst.base.resource;
    x[i] = lagrangian_point(inst.base.weight[i], lo, hi, chi[i]);
  }
  return x;
}

// Which side each prefix constraint ends on, read off the trace:
// -1 lower bound tight, +1 upper bound tight, 0 slack. Entry k covers the
// prefix of length k+1. Only meaningful for traces of unsplit solves.
inline std::vector<int> classify_prefixes(const MultiplierTrace& trace) {
  const std::size_t n = trace.kappa.size();
  std::vector<int> out(n > 0 ? n - 1 : 0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (trace.chi[j + 1] <= trace.kappa[j])
      out[j] = -1;
    else if (trace.chi[j + 1] >= trace.lambda[j])
      out[j] = 1;
    else
      out[j] = 0;
  }
  return out;
}

// Incremental solver. Feed one variable at a time together with its prefix
// window; the last step's window must be the pinned resource (L = U = R).
// Keeps, per prefix, the multipliers of the two window-target subproblems and
// a pool of still-relevant breakpoints; each step either extends the previous
// multipliers in O(1) or runs a short sweep over the pool. Total pool work is
// O(n log n) because every entry is inserted and consumed at most once.
class FastSolver {
 public:
  void reserve(std::size_t n) {
    weight_.reserve(n);
    low_.reserve(n);
    high_.reserve(n);
    trace_.kappa.reserve(n);
    trace_.lambda.reserve(n);
    trace_.p_lower.reserve(n);
    trace_.q_lower.reserve(n);
    trace_.p_upper.reserve(n);
    trace_.q_upper.reserve(n);
    pool_.reserve(2 * n);
  }

  std::size_t size() const { return weight_.size(); }

  void push(double weight, double lower, double upper, double prefix_lower,
            double prefix_upper) {
    const std::string at = std::to_string(size());
    if (!(std::isfinite(weight) && std::isfinite(lower) && std::isfinite(upper) &&
          std::isfinite(prefix_lower) && std::isfinite(prefix_upper)))
      throw ValidationError("non-finite input at step " + at);
    if (!(weight > 0.0)) throw ValidationError("a[" + at + "] not positive");
    if (lower > upper) throw ValidationError("l[" + at + "] > u[" + at + "]");
    if (prefix_lower > prefix_upper) throw ValidationError("L[" + at + "] > U[" + at + "]");

    const auto j = static_cast<std::uint32_t>(size() + 1);
    double win_lo, win_hi;
    if (j == 1) {
      win_lo = std::max(prefix_lower, lower);
      win_hi = std::min(prefix_upper, upper);
    } else {
      win_lo = std::max(prefix_lower, win_lo_ + lower);
      win_hi = std::min(prefix_upper, win_hi_ + upper);
    }
    if (win_lo > win_hi)
      throw InfeasibleError("tightened window empty at prefix " + std::to_string(j));

    // The first variable alone spans its prefix window, so its box shrinks
    // to the window and the window targets are its own breakpoints.
    const double el = (j == 1) ? win_lo : lower;
    const double eu = (j == 1) ? win_hi : upper;
    weight_.push_back(weight);
    low_.push_back(el);
    high_.push_back(eu);

    if (j == 1) {
      const double alpha = el / weight;
      const double beta = eu / weight;
      kappa_id_ = pool_.insert(alpha, BreakpointTag::initial_lower, 1);
      lambda_id_ = pool_.insert(beta, BreakpointTag::initial_upper, 1);
      trace_.kappa.push_back(alpha);
      trace_.lambda.push_back(beta);
      trace_.p_lower.push_back(0.0);
      trace_.q_lower.push_back(weight);
      trace_.p_upper.push_back(0.0);
      trace_.q_upper.push_back(weight);
    } else {
      advance(j, weight, el, eu, win_lo, win_hi);
    }
    win_lo_ = win_lo;
    win_hi_ = win_hi;
  }

  // Finish the solve. Requires the last pushed window to be pinned.
  Solution finalize() {
    const std::size_t n = size();
    if (n == 0) throw ValidationError("no steps pushed");
    if (!prefix_pinned(win_lo_, win_hi_))
      throw ValidationError("final prefix window must pin the resource (L = U = R)");
    trace_.chi = recover_chi(trace_);
    Solution sol;
    sol.x.resize(n);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.x[i] = lagrangian_point(weight_[i], low_[i], high_[i], trace_.chi[i]);
      obj += 0.5 * sol.x[i] * sol.x[i] / weight_[i];
    }
    sol.objective = obj;
    sol.trace = std::move(trace_);
    return sol;
  }

  const DepqPool& pool() const { return pool_; }

 private:
  void advance(std::uint32_t j, double a, double l, double u, double win_lo, double win_hi) {
    const double alpha = l / a;
    const double beta = u / a;
    const double kp = trace_.kappa.back();
    const double lp = trace_.lambda.back();
    const double plp = trace_.p_lower.back(), qlp = trace_.q_lower.back();
    const double pup = trace_.p_upper.back(), qup = trace_.q_upper.back();

    double kappa = 0.0, lambda = 0.0, pl = 0.0, ql = 0.0, pu = 0.0, qu = 0.0;
    bool kappa_set = false, lambda_set = false;

    // Lower window target first: check whether extending the previous
    // multiplier already meets it (corner cases), otherwise sweep below.
    const double reach_lo = win_lo_ + lagrangian_point(a, l, u, kp);
    if (std::abs(reach_lo - win_lo) <= 1e-12 * std::max(1.0, std::abs(win_lo))) {
      // Same multiplier still works; the live entry moves to this prefix.
      kappa = kp;
      kappa_set = true;
      adopt_kappa(j);
      if (kp < alpha) {
        pl = plp + l;
        ql = qlp;
      } else if (beta < kp) {
        pl = plp + u;
        ql = qlp;
      } else {
        pl = plp;
        ql = qlp + a;
      }
    } else if (reach_lo > win_lo) {
      // Overshoot: the earlier prefix stays pinned at its own lower bound
      // and only this variable moves. The quotient lies in [alpha, beta)
      // exactly, but the subtraction can drift an ulp past either end; a
      // value below alpha would re-admit alpha below and double-count
      // this variable, so clamp the dust away.
      kappa = (win_lo - win_lo_) / a;
      if (kappa < alpha)
        kappa = alpha;
      else if (kappa > beta)
        kappa = beta;
      kappa_set = true;
      pl = win_lo_;
      ql = a;
      kappa_id_ = pool_.insert(kappa, BreakpointTag::multiplier_lower, j);
    } else {
      // Undershoot: multiplier must rise. Drop the old entry now so the
      // sweep cursor, which already counts its group, never recounts it.
      pool_.remove(kappa_id_);
    }

    const double reach_hi = win_hi_ + lagrangian_point(a, l, u, lp);
    if (std::abs(reach_hi - win_hi) <= 1e-12 * std::max(1.0, std::abs(win_hi))) {
      lambda = lp;
      lambda_set = true;
      adopt_lambda(j);
      if (lp < alpha) {
        pu = pup + l;
        qu = qup;
      } else if (beta < lp) {
        pu = pup + u;
        qu = qup;
      } else {
        pu = pup;
        qu = qup + a;
      }
    } else if (reach_hi < win_hi) {
      // Mirror of the clamp above: dust past beta would re-admit beta.
      lambda = (win_hi - win_hi_) / a;
      if (lambda > beta)
        lambda = beta;
      else if (lambda < alpha)
        lambda = alpha;
      lambda_set = true;
      pu = win_hi_;
      qu = a;
      lambda_id_ = pool_.insert(lambda, BreakpointTag::multiplier_upper, j);
    } else {
      pool_.remove(lambda_id_);
    }

    // Admit this variable's breakpoints if they fall inside the live window.
    // Unset multipliers fall back to the previous step's.
    const double window_lo = kappa_set ? std::min(kp, kappa) : kp;
    const double window_hi = lambda_set ? std::max(lp, lambda) : lp;
    if (window_lo < alpha && alpha <= window_hi)
      pool_.insert(alpha, BreakpointTag::initial_lower, j);
    if (window_lo <= beta && beta < window_hi)
      pool_.insert(beta, BreakpointTag::initial_upper, j);

    if (!kappa_set) {
      // Cursor for the stretch just above kp, with this variable included.
      if (kp < alpha) {
        pl = plp + l;
        ql = qlp;
      } else if (kp < beta) {
        pl = plp;
        ql = qlp + a;
      } else {
        pl = plp + u;
        ql = qlp;
      }
      kappa = sweep_lower(win_lo, pl, ql);
      kappa_id_ = pool_.insert(kappa, BreakpointTag::multiplier_lower, j);
    }
    if (!lambda_set) {
      if (beta < lp) {
        pu = pup + u;
        qu = qup;
      } else if (alpha < lp) {
        pu = pup;
        qu = qup + a;
      } else {
        pu = pup + l;
        qu = qup;
      }
      lambda = sweep_upper(win_hi, pu, qu);
      lambda_id_ = pool_.insert(lambda, BreakpointTag::multiplier_upper, j);
    }

    trace_.kappa.push_back(kappa);
    trace_.lambda.push_back(lambda);
    trace_.p_lower.push_back(pl);
    trace_.q_lower.push_back(ql);
    trace_.p_upper.push_back(pu);
    trace_.q_upper.push_back(qu);
  }

  // Hand the live multiplier entry to prefix j. The very first handoff moves
  // the initial seed entry into the multiplier class; afterwards the tag is
  // stable and only the owner changes.
  void adopt_kappa(std::uint32_t j) {
    const auto e = pool_.get(kappa_id_);
    if (e.tag == BreakpointTag::multiplier_lower) {
      pool_.retag(kappa_id_, j);
    } else {
      pool_.remove(kappa_id_);
      kappa_id_ = pool_.insert(e.value, BreakpointTag::multiplier_lower, j);
    }
  }

  void adopt_lambda(std::uint32_t j) {
    const auto e = pool_.get(lambda_id_);
    if (e.tag == BreakpointTag::multiplier_upper) {
      pool_.retag(lambda_id_, j);
    } else {
      pool_.remove(lambda_id_);
      lambda_id_ = pool_.insert(e.value, BreakpointTag::multiplier_upper, j);
    }
  }

  // Crossing a breakpoint upward: lower-side entries open their variable or
  // group into the interior, upper-side entries clamp it high.
  void apply_ascending(const DepqPool::EntryRef& e, double& p, double& q) const {
    const std::size_t k = e.owner - 1;
    switch (e.tag) {
      case BreakpointTag::initial_lower:
        p -= low_[k];
        q += weight_[k];
        break;
      case BreakpointTag::initial_upper:
        p += high_[k];
        q -= weight_[k];
        break;
      case BreakpointTag::multiplier_lower:
        p -= trace_.q_lower[k] * e.value;
        q += trace_.q_lower[k];
        break;
      case BreakpointTag::multiplier_upper:
        p += trace_.q_upper[k] * e.value;
        q -= trace_.q_upper[k];
        break;
    }
  }

  void apply_descending(const DepqPool::EntryRef& e, double& p, double& q) const {
    const std::size_t k = e.owner - 1;
    switch (e.tag) {
      case BreakpointTag::initial_lower:
        p += low_[k];
        q -= weight_[k];
        break;
      case BreakpointTag::initial_upper:
        p -= high_[k];
        q += weight_[k];
        break;
      case BreakpointTag::multiplier_lower:
        p += trace_.q_lower[k] * e.value;
        q -= trace_.q_lower[k];
        break;
      case BreakpointTag::multiplier_upper:
        p -= trace_.q_upper[k] * e.value;
        q += trace_.q_upper[k];
        break;
    }
  }

  double sweep_lower(double target, double& p, double& q) {
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    double last = trace_.kappa.back();
    while (auto c = pool_.peek_min()) {
      const double z = p + q * c->value;
      if (std::abs(z - target) <= tol) return c->value;
      if (z > target) {
        if (q <= 0.0) throw InternalError("lower sweep bracketed target with no interior weight");
        return (target - p) / q;
      }
      pool_.pop_min();
      apply_ascending(*c, p, q);
      last = c->value;
    }
    // Pool ran dry: above the last live breakpoint z stays affine, because
    // breakpoints beyond the window were never admitted.
    if (q > 0.0) return (target - p) / q;
    if (std::abs(p - target) <= tol) return last;
    throw InternalError("lower sweep exhausted breakpoints before target");
  }

  double sweep_upper(double target, double& p, double& q) {
    const double tol = 1e-12 * std::max(1.0, std::abs(target));
    double last = trace_.lambda.back();
    while (auto c = pool_.peek_max()) {
      const double z = p + q * c->value;
      if (std::abs(z - target) <= tol) return c->value;
      if (z < target) {
        if (q <= 0.0) throw InternalError("upper sweep bracketed target with no interior weight");
        return (target - p) / q;
      }
      pool_.pop_max();
      apply_descending(*c, p, q);
      last = c->value;
    }
    if (q > 0.0) return (target - p) / q;
    if (std::abs(p - target) <= tol) return last;
    throw InternalError("upper sweep exhausted breakpoints before target");
  }

  std::vector<double> weight_, low_, high_;
  MultiplierTrace trace_;
  DepqPool pool_;
  DepqPool::EntryId kappa_id_ = 0, lambda_id_ = 0;
  double win_lo_ = 0.0, win_hi_ = 0.0;
};

// Full solve: validate, tighten, cut at pinned prefixes, then run the
// incremental solver over each piece. Traces of the pieces are concatenated.
inline Solution solve_fast(const QrapNcInstance& raw) {
  const QrapNcInstance inst = tighten(validate(raw));
  const auto pieces = split_on_equal_bounds(inst);

  Solution out;
  out.trace = MultiplierTrace{};
  out.x.reserve(inst.size());
  std::size_t done = 0;
  for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
    const QrapNcInstance& piece = pieces[pi];
    const std::size_t m = piece.size();
    FastSolver solver;
    solver.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double lo = (i + 1 < m) ? piece.prefix_lower[i] : piece.base.resource;
      const double hi = (i + 1 < m) ? piece.prefix_upper[i] : piece.base.resource;
      solver.push(piece.base.weight[i], piece.base.lower[i], piece.base.upper[i], lo, hi);
    }
    Solution part = solver.finalize();
    out.x.insert(out.x.end(), part.x.begin(), part.x.end());
    MultiplierTrace& t = *out.trace;
    MultiplierTrace& pt = *part.trace;
    t.kappa.insert(t.kappa.end(), pt.kappa.begin(), pt.kappa.end());
    t.lambda.insert(t.lambda.end(), pt.lambda.begin(), pt.lambda.end());
    t.chi.insert(t.chi.end(), pt.chi.begin(), pt.chi.end());
    t.p_lower.insert(t.p_lower.end(), pt.p_lower.begin(), pt.p_lower.end());
    t.q_lower.insert(t.q_lower.end(), pt.q_lower.begin(), pt.q_lower.end());
    t.p_upper.insert(t.p_upper.end(), pt.p_upper.begin(), pt.p_upper.end());
    t.q_upper.insert(t.q_upper.end(), pt.q_upper.begin(), pt.q_upper.end());
    done += m;
    if (pi + 1 < pieces.size()) out.splits.push_back(done);
  }
  out.objective = objective(inst, out.x);
  return out;
}

}  // namespace qrapnc
