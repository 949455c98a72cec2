#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef CLI_PATH
#error "CLI_PATH must point at the qrapnc binary"
#endif

namespace {

// End-to-end checks running the installed binary through a shell. Exit codes
// follow the contract: 0 ok, 1 verification failure, 2 usage or input error,
// 3 infeasible instance.

struct RunResult {
  int code;
  std::string out;
};

std::string temp_path(const std::string& name) {
  // ctest runs each test in its own process; the pid keeps parallel
  // invocations from stomping each other's files.
  return ::testing::TempDir() + "cli_" + std::to_string(::getpid()) + "_" + name;
}

RunResult run(const std::string& cmd) {
  const std::string out_file = temp_path("stdout.txt");
  const int raw = std::system((cmd + " > " + out_file + " 2>/dev/null").c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const std::string cli = CLI_PATH;

TEST(Cli, GenerateSolveVerifyPipeline) {
  auto r = run(cli + " generate --n 6 --seed 7 | " + cli +
               " solve --algorithm fast --trace | " + cli + " verify");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("feasible").get<bool>());
  EXPECT_TRUE(j.at("optimal").get<bool>());
}

TEST(Cli, FileModeRoundTrip) {
  const std::string inst = temp_path("inst.json");
  const std::string sol = temp_path("sol.json");
  ASSERT_EQ(run(cli + " generate --n 12 --seed 3 --out " + inst).code, 0);
  ASSERT_EQ(run(cli + " solve --algorithm seq-basic --in " + inst + " --out " + sol).code, 0);
  std::ifstream in(sol);
  auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.contains("x"));
  EXPECT_TRUE(j.contains("objective"));
  EXPECT_TRUE(j.contains("instance"));
  EXPECT_FALSE(j.contains("kappa"));  // no --trace
  auto r = run(cli + " verify --in " + inst + " --solution " + sol);
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, GenerateIsDeterministic) {
  auto a = run(cli + " generate --n 20 --seed 41");
  auto b = run(cli + " generate --n 20 --seed 41");
  auto c = run(cli + " generate --n 20 --seed 42");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, SolversAgreeThroughPipeline) {
  const std::string inst = temp_path("agree.json");
  ASSERT_EQ(run(cli + " generate --n 40 --seed 11 --out " + inst).code, 0);
  std::vector<std::vector<double>> xs;
  for (const char* alg : {"fast", "seq-basic", "inf"}) {
    auto r = run(cli + " solve --algorithm " + alg + " --in " + inst);
    ASSERT_EQ(r.code, 0) << alg;
    xs.push_back(nlohmann::json::parse(r.out).at("x").get<std::vector<double>>());
  }
  for (std::size_t i = 0; i < xs[0].size(); ++i) {
    EXPECT_NEAR(xs[0][i], xs[1][i], 1e-8);
    EXPECT_NEAR(xs[0][i], xs[2][i], 1e-8);
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(cli + " solve --algorithm bogus < /dev/null").code, 2);
  EXPECT_EQ(run(cli + " solve --algorithm fast --in /nonexistent/path.json").code, 2);
  EXPECT_EQ(run(cli).code, 2);              // missing subcommand
  EXPECT_EQ(run(cli + " generate").code, 2);  // missing required options
  const std::string garbage = temp_path("garbage.json");
  write_file(garbage, "not json at all");
  EXPECT_EQ(run(cli + " solve --algorithm fast --in " + garbage).code, 2);
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run(cli + " --help").code, 0);
  EXPECT_EQ(run(cli + " solve --help").code, 0);
}

TEST(Cli, InfeasibleExitsThree) {
  const std::string inst = temp_path("infeasible.json");
  write_file(inst,
             R"({"a":[1,1],"l":[0,0],"u":[1,1],"L":[0.5],"U":[0.6],"R":5.0})");
  EXPECT_EQ(run(cli + " solve --algorithm fast --in " + inst).code, 3);
}

TEST(Cli, VerifyRejectsCorruptedSolution) {
  const std::string inst = temp_path("verify_inst.json");
  const std::string sol = temp_path("verify_sol.json");
  ASSERT_EQ(run(cli + " generate --n 8 --seed 9 --out " + inst).code, 0);
  ASSERT_EQ(run(cli + " solve --algorithm fast --in " + inst + " --out " + sol).code, 0);
  std::ifstream in(sol);
  auto j = nlohmann::json::parse(in);
  auto x = j.at("x").get<std::vector<double>>();
  x[0] += 0.25;
  j["x"] = x;
  write_file(sol, j.dump());
  auto r = run(cli + " verify --in " + inst + " --solution " + sol);
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("feasible").get<bool>());
}

TEST(Cli, BatteryPipeline) {
  const std::string profile = temp_path("profile.csv");
  std::ostringstream p;
  p << "power_w\n";
  for (int i = 0; i < 48; ++i) p << (500.0 + 300.0 * ((i * 37) % 11)) << "\n";
  write_file(profile, p.str());
  auto r = run(cli + " battery --scenario small --profile " + profile + " | " + cli +
               " solve --algorithm fast | " + cli + " verify");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("optimal").get<bool>());
}

TEST(Cli, BatteryPresetScenarioOut) {
  const std::string profile = temp_path("preset_profile.csv");
  write_file(profile, "100\n200\n300\n400\n");
  const std::string scen = temp_path("scen.json");
  auto r = run(cli + " battery --scenario large --profile " + profile +
               " --soc-frac 0.25 --scenario-out " + scen + " --out /dev/null");
  ASSERT_EQ(r.code, 0);
  std::ifstream in(scen);
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("x_min").get<double>(), -3.6e4);
  EXPECT_EQ(j.at("x_max").get<double>(), 3.6e4);
  EXPECT_EQ(j.at("cap").get<double>(), 7.2e5);
  EXPECT_EQ(j.at("dt").get<double>(), 0.25);
  EXPECT_EQ(j.at("soc_start").get<double>(), 0.25 * 7.2e5);
}

TEST(Cli, BatteryHorizonTruncates) {
  const std::string profile = temp_path("short_profile.csv");
  write_file(profile, "100\n200\n300\n400\n");
  auto r = run(cli + " battery --scenario small --profile " + profile + " --horizon 2");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("a").size(), 2u);
  EXPECT_EQ(run(cli + " battery --scenario small --profile " + profile + " --horizon 9").code,
            2);
}

TEST(Cli, BenchEmitsCsv) {
  auto r = run(cli + " bench --sizes 50,100 --reps 2 --seed 5 --algorithms fast,inf");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "n,algorithm,seed,time_s,tight_count,split_count");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 8);  // 2 sizes x 2 algorithms x 2 reps
}

}  // namespace
