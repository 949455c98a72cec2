// Command line front end: generate instances, map battery scenarios, solve,
// verify, and benchmark. Exit codes: 0 success, 1 verification failure,
// 2 usage or input error, 3 infeasible instance.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrapnc/qrapnc.hpp"

namespace {

std::string read_all(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qrapnc::ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qrapnc::ValidationError("cannot open '" + path + "' for writing");
  out << content;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw qrapnc::ValidationError(std::string("bad ") + what + " JSON: " + e.what());
  }
}

// Accept either a bare instance document or anything carrying one.
qrapnc::QrapNcInstance load_instance(const nlohmann::json& j) {
  if (j.contains("a")) return qrapnc::instance_from_json(j);
  if (j.contains("instance")) return qrapnc::instance_from_json(j.at("instance"));
  throw qrapnc::ValidationError("no instance found in input");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic allocation with nested prefix windows"};
  app.require_subcommand(1);
  std::function<int()> action;

  // generate
  auto* gen = app.add_subcommand("generate", "emit a random feasible instance as JSON");
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of variables")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->callback([&] {
    action = [&]() {
      const auto inst = qrapnc::gen_synthetic(gen_n, gen_seed);
      write_all(gen_out, qrapnc::instance_to_json(inst).dump() + "\n");
      return 0;
    };
  });

  // battery
  auto* bat = app.add_subcommand("battery", "map a battery scenario to an instance");
  std::string bat_scenario, bat_profile, bat_scenario_file, bat_out, bat_scenario_out;
  double bat_soc = 0.5;
  std::size_t bat_horizon = 0;
  bat->add_option("--scenario", bat_scenario, "small|medium|large|file")
      ->required()
      ->check(CLI::IsMember({"small", "medium", "large", "file"}));
  bat->add_option("--profile", bat_profile, "CSV with one power value (W) per line");
  bat->add_option("--scenario-file", bat_scenario_file, "scenario JSON (with --scenario file)");
  bat->add_option("--soc-frac", bat_soc, "start/end state of charge as a fraction of capacity")
      ->check(CLI::Range(0.0, 1.0));
  bat->add_option("--horizon", bat_horizon, "truncate the profile to this many intervals");
  bat->add_option("--out", bat_out, "instance output path (default stdout)");
  bat->add_option("--scenario-out", bat_scenario_out, "also write the scenario JSON here");
  bat->callback([&] {
    action = [&]() {
      qrapnc::BatteryScenario scenario;
      if (bat_scenario == "file") {
        if (bat_scenario_file.empty())
          throw qrapnc::ValidationError("--scenario file requires --scenario-file");
        scenario = qrapnc::scenario_from_json(
            parse_json(read_all(bat_scenario_file), "scenario"));
        if (!bat_profile.empty())
          scenario.base_power = qrapnc::read_profile_csv(read_all(bat_profile));
      } else {
        if (bat_profile.empty())
          throw qrapnc::ValidationError("preset scenarios require --profile");
        scenario = qrapnc::battery_preset(
            bat_scenario, qrapnc::read_profile_csv(read_all(bat_profile)), bat_soc);
      }
      if (bat_horizon > 0) {
        if (scenario.base_power.size() < bat_horizon)
          throw qrapnc::ValidationError("profile shorter than requested horizon");
        scenario.base_power.resize(bat_horizon);
      }
      scenario = qrapnc::validate_scenario(std::move(scenario));
      const auto mapping = qrapnc::battery_to_qrapnc(scenario);
      if (!bat_scenario_out.empty())
        write_all(bat_scenario_out, qrapnc::scenario_to_json(scenario).dump() + "\n");
      write_all(bat_out, qrapnc::instance_to_json(mapping.instance).dump() + "\n");
      return 0;
    };
  });

  // solve
  auto* sol = app.add_subcommand("solve", "solve an instance read as JSON");
  std::string sol_alg, sol_in, sol_out;
  bool sol_trace = false;
  sol->add_option("--algorithm", sol_alg, "fast|seq-basic|inf")
      ->required()
      ->check(CLI::IsMember({"fast", "seq-basic", "inf"}));
  sol->add_option("--in", sol_in, "instance JSON path (default stdin)");
  sol->add_option("--out", sol_out, "solution output path (default stdout)");
  sol->add_flag("--trace", sol_trace, "include multiplier arrays in the output");
  sol->callback([&] {
    action = [&]() {
      const auto inst = load_instance(parse_json(read_all(sol_in), "instance"));
      qrapnc::Solution solution;
      if (sol_alg == "fast")
        solution = qrapnc::solve_fast(inst);
      else if (sol_alg == "seq-basic")
        solution = qrapnc::solve_seq_basic(inst);
      else
        solution = qrapnc::solve_inf(inst);
      write_all(sol_out, qrapnc::solution_to_json(solution, &inst, sol_trace).dump() + "\n");
      return 0;
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "check feasibility and pairwise optimality");
  std::string ver_in, ver_sol;
  double ver_tol = 0.0;
  ver->add_option("--in", ver_in, "instance JSON path (default: embedded in the solution)");
  ver->add_option("--solution", ver_sol, "solution JSON path (default stdin)");
  ver->add_option("--tol", ver_tol, "override the scaled default tolerance");
  ver->callback([&] {
    action = [&]() {
      const auto doc = parse_json(read_all(ver_sol), "solution");
      const auto solution = qrapnc::solution_from_json(doc);
      qrapnc::QrapNcInstance inst;
      if (!ver_in.empty())
        inst = load_instance(parse_json(read_all(ver_in), "instance"));
      else
        inst = load_instance(doc);
      const double tol = ver_tol > 0.0 ? ver_tol : qrapnc::default_tolerance(inst);
      const auto report = qrapnc::verify_solution(inst, solution.x, tol);
      std::cout << qrapnc::report_to_json(report).dump() << "\n";
      return (report.feasible && report.optimal) ? 0 : 1;
    };
  });

  // bench
  auto* ben = app.add_subcommand("bench", "time solvers over a size sweep, emit CSV");
  qrapnc::ScalingOptions opt;
  std::string ben_out;
  ben->add_option("--sizes", opt.sizes, "comma-separated instance sizes")
      ->required()
      ->delimiter(',');
  ben->add_option("--reps", opt.reps, "repetitions per size")->default_val(3);
  ben->add_option("--seed", opt.master_seed, "master seed")->default_val(1);
  ben->add_option("--algorithms", opt.algorithms, "comma-separated solver names")
      ->delimiter(',')
      ->check(CLI::IsMember({"fast", "seq-basic", "inf"}));
  ben->add_option("--jobs", opt.jobs, "worker threads; 1 keeps timing strictly serial")
      ->default_val(1);
  ben->add_option("--out", ben_out, "CSV output path (default stdout)");
  ben->callback([&] {
    action = [&]() {
      const auto records = qrapnc::run_scaling(opt);
      write_all(ben_out, qrapnc::bench_to_csv(records));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const qrapnc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const qrapnc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
