#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrapnc/battery.hpp"
#include "qrapnc/bench.hpp"
#include "qrapnc/errors.hpp"
#include "qrapnc/instance.hpp"
#include "qrapnc/solution.hpp"
#include "qrapnc/verify.hpp"

namespace qrapnc {

inline nlohmann::json instance_to_json(const QrapNcInstance& inst) {
  return {{"a", inst.base.weight}, {"l", inst.base.lower}, {"u", inst.base.upper},
          {"L", inst.prefix_lower}, {"U", inst.prefix_upper}, {"R", inst.base.resource}};
}

inline QrapNcInstance instance_from_json(const nlohmann::json& j) {
  QrapNcInstance inst;
  try {
    inst.base.weight = j.at("a").get<std::vector<double>>();
    inst.base.lower = j.at("l").get<std::vector<double>>();
    inst.base.upper = j.at("u").get<std::vector<double>>();
    inst.prefix_lower = j.at("L").get<std::vector<double>>();
    inst.prefix_upper = j.at("U").get<std::vector<double>>();
    inst.base.resource = j.at("R").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad instance JSON: ") + e.what());
  }
  return validate(std::move(inst));
}

inline nlohmann::json scenario_to_json(const BatteryScenario& s) {
  return {{"p", s.base_power},   {"dt", s.interval_hours}, {"x_min", s.charge_min},
          {"x_max", s.charge_max}, {"cap", s.capacity},      {"soc_start", s.soc_start},
          {"soc_end", s.soc_end}};
}

inline BatteryScenario scenario_from_json(const nlohmann::json& j) {
  BatteryScenario s;
  try {
    s.base_power = j.at("p").get<std::vector<double>>();
    s.interval_hours = j.at("dt").get<double>();
    s.charge_min = j.at("x_min").get<double>();
    s.charge_max = j.at("x_max").get<double>();
    s.capacity = j.at("cap").get<double>();
    s.soc_start = j.at("soc_start").get<double>();
    s.soc_end = j.at("soc_end").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad scenario JSON: ") + e.what());
  }
  return validate_scenario(std::move(s));
}

// The instance rides along inside the solution document so downstream
// verification can work from a single stream.
inline nlohmann::json solution_to_json(const Solution& sol,
                                       const QrapNcInstance* instance = nullptr,
                                       bool include_trace = true) {
  nlohmann::json j{{"x", sol.x}, {"objective", sol.objective}};
  if (sol.trace && include_trace) {
    j["kappa"] = sol.trace->kappa;
    j["lambda"] = sol.trace->lambda;
    j["chi"] = sol.trace->chi;
  }
  if (!sol.splits.empty()) j["splits"] = sol.splits;
  if (instance) j["instance"] = instance_to_json(*instance);
  return j;
}

inline Solution solution_from_json(const nlohmann::json& j) {
  Solution sol;
  try {
    sol.x = j.at("x").get<std::vector<double>>();
    sol.objective = j.at("objective").get<double>();
    if (j.contains("kappa")) {
      MultiplierTrace t;
      t.kappa = j.at("kappa").get<std::vector<double>>();
      t.lambda = j.at("lambda").get<std::vector<double>>();
      if (j.contains("chi")) t.chi = j.at("chi").get<std::vector<double>>();
      sol.trace = std::move(t);
    }
    if (j.contains("splits")) sol.splits = j.at("splits").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad solution JSON: ") + e.what());
  }
  return sol;
}

inline nlohmann::json report_to_json(const VerificationReport& rep) {
  nlohmann::json tight = nlohmann::json::array();
  for (const auto& t : rep.tight)
    tight.push_back({{"j", t.prefix}, {"side", t.side == TightSide::lower ? "lower" : "upper"}});
  nlohmann::json exchange{{"from", nullptr}, {"to", nullptr}, {"worst_rate", nullptr}};
  if (rep.exchange.from != SIZE_MAX) {
    exchange["from"] = rep.exchange.from;
    exchange["to"] = rep.exchange.to;
    exchange["worst_rate"] = rep.exchange.worst_rate;
  }
  return {{"feasible", rep.feasible},
          {"optimal", rep.optimal},
          {"tolerance", rep.tolerance},
          {"max_bound_violation", rep.feasibility.max_bound_violation},
          {"max_nested_violation", rep.feasibility.max_nested_violation},
          {"resource_residual", rep.feasibility.resource_residual},
          {"exchange", exchange},
          {"tight", tight}};
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string bench_to_csv(std::span<const BenchRecord> records) {
  std::string out = "n,algorithm,seed,time_s,tight_count,split_count\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + r.algorithm + ',' + std::to_string(r.seed) + ',' +
           detail::format_double(r.time_s) + ',' + std::to_string(r.tight_count) + ',' +
           std::to_string(r.split_count) + '\n';
  }
  return out;
}

inline std::vector<BenchRecord> bench_from_csv(const std::string& text) {
  std::vector<BenchRecord> records;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("n,algorithm", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
      }
    }
    if (fields.size() != 6) throw ValidationError("bad CSV row: " + line);
    BenchRecord r;
    r.n = std::strtoull(fields[0].c_str(), nullptr, 10);
    r.algorithm = fields[1];
    r.seed = std::strtoull(fields[2].c_str(), nullptr, 10);
    r.time_s = std::strtod(fields[3].c_str(), nullptr);
    r.tight_count = std::strtoull(fields[4].c_str(), nullptr, 10);
    r.split_count = std::strtoull(fields[5].c_str(), nullptr, 10);
    records.push_back(std::move(r));
  }
  return records;
}

// One power value per line; an optional non-numeric first line is skipped.
inline std::vector<double> read_profile_csv(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    std::string tok = comma == std::string::npos ? line : line.substr(0, comma);
    while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
    std::size_t head = 0;
    while (head < tok.size() && tok[head] == ' ') ++head;
    tok = tok.substr(head);
    if (tok.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw ValidationError("bad profile value: '" + tok + "'");
    }
    first = false;
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError("profile is empty");
  return values;
}

}  // namespace qrapnc
