#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qrapnc {

// Per-prefix Lagrange multipliers recorded by the incremental solver.
// kappa[j] / lambda[j] are the multipliers of the prefix subproblem with
// target prefix_lower[j] / prefix_upper[j]; the last entries correspond to
// the full resource constraint and coincide. chi[j] is the multiplier the
// final solution actually uses for variable j.
struct MultiplierTrace {
  std::vector<double> kappa;
  std::vector<double> lambda;
  std::vector<double> chi;
  // Frozen sweep cursors per step: value of the clamped-bound sum (p) and the
  // interior weight sum (q) at the moment each multiplier was fixed.
  std::vector<double> p_lower, q_lower;
  std::vector<double> p_upper, q_upper;
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  std::optional<MultiplierTrace> trace;
  // Prefix lengths where the instance was cut before solving (pinned prefix
  // windows, or constraints fixed by the relaxation solver). 1-based.
  std::vector<std::size_t> splits;
};

}  // namespace qrapnc
