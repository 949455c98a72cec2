#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"
#include "qrapnc/qrap.hpp"
#include "qrapnc/solution.hpp"

namespace qrapnc {

// Intermediate state of the stepwise solver, kept only when a caller asks:
// for each prefix length k+1, the solutions of the two window-target
// subproblems (which become the next step's variable bounds) and their
// multipliers. O(n^2) memory, meant for small-n checks.
struct SeqBasicSteps {
  std::vector<std::vector<double>> at_lower;  // x^{k+1}(L_{k+1}), length k+1
  std::vector<std::vector<double>> at_upper;
  std::vector<double> kappa;  // lower-target multiplier per prefix; last entry is the final solve
  std::vector<double> lambda;
};

// Plain stepwise solver: for each prefix solve the subproblem at both window
// targets and shrink the variable bounds to the two solutions, then solve the
// full problem once. Quadratic work, linear memory unless steps are retained.
inline Solution solve_seq_basic(const QrapNcInstance& raw, SeqBasicSteps* steps = nullptr) {
  const QrapNcInstance inst = tighten(validate(raw));
  const std::size_t n = inst.size();

  QrapInstance sub;
  sub.weight = inst.base.weight;
  sub.lower = inst.base.lower;
  sub.upper = inst.base.upper;

  for (std::size_t k = 0; k + 1 < n; ++k) {
    QrapInstance head;
    head.weight.assign(sub.weight.begin(), sub.weight.begin() + k + 1);
    head.lower.assign(sub.lower.begin(), sub.lower.begin() + k + 1);
    head.upper.assign(sub.upper.begin(), sub.upper.begin() + k + 1);
    head.resource = inst.prefix_lower[k];
    const QrapSolution at_lo = solve_qrap(head);
    head.resource = inst.prefix_upper[k];
    const QrapSolution at_hi = solve_qrap(head);
    for (std::size_t i = 0; i <= k; ++i) {
      sub.lower[i] = at_lo.x[i];
      sub.upper[i] = at_hi.x[i];
    }
    if (steps) {
      steps->at_lower.push_back(at_lo.x);
      steps->at_upper.push_back(at_hi.x);
      steps->kappa.push_back(at_lo.multiplier);
      steps->lambda.push_back(at_hi.multiplier);
    }
  }

  sub.resource = inst.base.resource;
  const QrapSolution fin = solve_qrap(sub);
  if (steps) {
    steps->kappa.push_back(fin.multiplier);
    steps->lambda.push_back(fin.multiplier);
  }

  Solution sol;
  sol.x = fin.x;
  sol.objective = objective(inst, sol.x);
  return sol;
}

// Relaxation solver: solve ignoring the prefix windows, find the worst
// violated window, pin the prefix sum there, and recurse on both halves.
// Terminates because every pinned prefix leaves both halves strictly smaller.
inline Solution solve_inf(const QrapNcInstance& raw) {
  const QrapNcInstance inst = tighten(validate(raw));
  const std::size_t n = inst.size();

  Solution sol;
  sol.x.assign(n, 0.0);

  struct Frame {
    std::size_t begin, end;  // variable range, end exclusive
    double target;           // required sum over the range
    double base;             // prefix value already fixed before `begin`
  };
  std::vector<Frame> stack{{0, n, inst.base.resource, 0.0}};

  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const std::size_t m = f.end - f.begin;

    QrapInstance window;
    window.weight.assign(inst.base.weight.begin() + f.begin, inst.base.weight.begin() + f.end);
    window.lower.assign(inst.base.lower.begin() + f.begin, inst.base.lower.begin() + f.end);
    window.upper.assign(inst.base.upper.begin() + f.begin, inst.base.upper.begin() + f.end);
    window.resource = f.target;
    const QrapSolution relaxed = solve_qrap(window);

    // Worst violated prefix window inside the range. Largest violation wins,
    // then the earliest prefix, then the lower side.
    double worst = 0.0;
    std::size_t worst_k = 0;
    bool worst_low = false, found = false;
    double s = f.base;
    for (std::size_t t = 0; t + 1 < m; ++t) {
      s += relaxed.x[t];
      const std::size_t k = f.begin + t;
      const double lo = inst.prefix_lower[k];
      const double hi = inst.prefix_upper[k];
      const double v_lo = lo - s;
      const double v_hi = s - hi;
      const bool low_side = v_lo >= v_hi;
      const double v = low_side ? v_lo : v_hi;
      const double tol =
          1e-12 * std::max({1.0, std::abs(lo), std::abs(hi), std::abs(s)});
      if (v > tol && (!found || v > worst)) {
        worst = v;
        worst_k = k;
        worst_low = low_side;
        found = true;
      }
    }

    if (!found) {
      std::copy(relaxed.x.begin(), relaxed.x.end(), sol.x.begin() + f.begin);
      continue;
    }

    const double pinned =
        worst_low ? inst.prefix_lower[worst_k] : inst.prefix_upper[worst_k];
    sol.splits.push_back(worst_k + 1);
    stack.push_back({worst_k + 1, f.end, f.base + f.target - pinned, pinned});
    stack.push_back({f.begin, worst_k + 1, pinned - f.base, f.base});
  }

  std::sort(sol.splits.begin(), sol.splits.end());
  sol.objective = objective(inst, sol.x);
  return sol;
}

}  // namespace qrapnc
