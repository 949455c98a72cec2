#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qrapnc/errors.hpp"
#include "qrapnc/fast_solver.hpp"
#include "qrapnc/instance.hpp"
#include "qrapnc/reference_solvers.hpp"
#include "qrapnc/rng.hpp"
#include "qrapnc/verify.hpp"

namespace qrapnc {

struct BenchRecord {
  std::size_t n = 0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double time_s = 0.0;  // solve only; generation and reporting excluded. nan on solver error
  std::size_t tight_count = 0;
  std::size_t split_count = 0;
};

struct ScalingOptions {
  std::vector<std::size_t> sizes;
  std::size_t reps = 3;
  std::uint64_t master_seed = 1;
  std::vector<std::string> algorithms{"fast"};
  unsigned jobs = 1;  // 1 = strictly serial timing
};

// Same (master, n, rep) always maps to the same instance seed, so every
// algorithm in a run sees identical instances.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t n, std::size_t rep) {
  return splitmix64(splitmix64(master ^ static_cast<std::uint64_t>(n)) ^
                    static_cast<std::uint64_t>(rep));
}

namespace detail {

inline Solution run_algorithm(const std::string& name, const QrapNcInstance& inst) {
  if (name == "fast") return solve_fast(inst);
  if (name == "seq-basic") return solve_seq_basic(inst);
  if (name == "inf") return solve_inf(inst);
  if (name == "noop") return Solution{};  // timing-isolation stub, does no work
  throw ValidationError("unknown algorithm '" + name + "'");
}

}  // namespace detail

inline std::vector<BenchRecord> run_scaling(const ScalingOptions& opt) {
  if (opt.sizes.empty()) throw ValidationError("no sizes given");
  if (opt.reps == 0) throw ValidationError("reps must be positive");
  if (opt.algorithms.empty()) throw ValidationError("no algorithms given");

  struct Cell {
    std::size_t n, rep;
    std::string algorithm;
  };
  std::vector<Cell> cells;
  for (std::size_t n : opt.sizes)
    for (const auto& alg : opt.algorithms)
      for (std::size_t rep = 0; rep < opt.reps; ++rep) cells.push_back({n, rep, alg});

  std::vector<BenchRecord> records(cells.size());
  auto run_cell = [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    BenchRecord rec;
    rec.n = cell.n;
    rec.algorithm = cell.algorithm;
    rec.seed = cell_seed(opt.master_seed, cell.n, cell.rep);
    const QrapNcInstance inst = gen_synthetic(cell.n, rec.seed);
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const Solution sol = detail::run_algorithm(cell.algorithm, inst);
      const auto t1 = std::chrono::steady_clock::now();
      rec.time_s = std::chrono::duration<double>(t1 - t0).count();
      rec.split_count = sol.splits.size();
      if (sol.x.size() == inst.size())
        rec.tight_count = tight_constraints(inst, sol.x, default_tolerance(inst)).size();
    } catch (const std::exception&) {
      rec.time_s = std::numeric_limits<double>::quiet_NaN();
    }
    records[ci] = std::move(rec);
  };

  if (opt.jobs <= 1) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const unsigned count = std::min<std::size_t>(opt.jobs, cells.size());
    workers.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t ci = next.fetch_add(1); ci < cells.size(); ci = next.fetch_add(1))
          run_cell(ci);
      });
    }
    for (auto& t : workers) t.join();
  }
  return records;
}

struct PowerFit {
  double c1 = 0.0;       // time ~ c1 * n^c2
  double c2 = 0.0;
  double residual = 0.0; // rms residual in log space
};

inline PowerFit fit_power_law(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [n, t] : points)
    if (n > 0.0 && t > 0.0 && std::isfinite(t)) logs.emplace_back(std::log(n), std::log(t));
  if (logs.size() < 2) throw ValidationError("need at least two usable points to fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(logs.size());
  const double denom = m * sxx - sx * sx;
  if (denom <= 0.0) throw ValidationError("points do not span distinct sizes");
  PowerFit fit;
  fit.c2 = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.c2 * sx) / m;
  fit.c1 = std::exp(intercept);
  double ss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (intercept + fit.c2 * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

struct GroupStats {
  double mean = 0.0;
  double max = 0.0;
  std::optional<double> cov;  // sample stddev / mean; absent for single values or zero mean
};

inline GroupStats summarize(std::span<const double> values) {
  if (values.empty()) throw ValidationError("no values to summarize");
  GroupStats st;
  st.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    st.max = std::max(st.max, v);
  }
  st.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1 && st.mean != 0.0) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.cov = std::sqrt(ss / static_cast<double>(values.size() - 1)) / st.mean;
  }
  return st;
}

}  // namespace qrapnc
