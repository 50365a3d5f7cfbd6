#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cachedof/cli.hpp"

using namespace cachedof;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cachedof_test_" + name);
}

}  // namespace

TEST(CliDof, MixedWorkedExample) {
  Result r = run({"dof", "--t_t", "2", "--t_r", "1", "--k_r", "3", "--alpha", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("d_mixed 2.7 (27/10)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("d_full 3 (3/1)"), std::string::npos);
  EXPECT_NE(r.out.find("d_delayed 2.4 (12/5)"), std::string::npos);
}

TEST(CliDof, SingleTransmitterDelayed) {
  Result r = run({"dof", "--t_t", "1", "--t_r", "0", "--k_r", "4", "--alpha", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("d_mixed 1 (1/1)"), std::string::npos) << r.out;
}

TEST(CliDof, ValidationFailureNamesConstraint) {
  Result r = run({"dof", "--t_t", "0.5", "--t_r", "0", "--k_r", "4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("t_t >= 1"), std::string::npos) << r.err;
  EXPECT_EQ(run({"dof", "--t_t", "2", "--t_r", "1", "--k_r", "3", "--alpha", "2"}).code, 2);
  EXPECT_EQ(run({"dof", "--t_t", "x"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliDof, FromCacheSizes) {
  Result r = run({"dof", "--k_t", "2", "--k_r", "3", "--n", "3", "--m_t", "3", "--m_r", "1", "--alpha", "1/2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(27/10)"), std::string::npos) << r.out;
}

TEST(CliSweep, AlphaCurvesPresetRowCount) {
  Result r = run({"sweep", "--preset", "alpha-curves"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 64);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(r.out, run({"sweep", "--preset", "alpha-curves"}).out);
}

TEST(CliSweep, BetaCurvesAlphaZeroIsConstant) {
  Result r = run({"sweep", "--preset", "beta-curves"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int zero_rows = 0;
  while (std::getline(in, line))
    if (line.rfind("0,", 0) == 0) {
      ++zero_rows;
      EXPECT_NE(line.find(",100,100/1"), std::string::npos) << line;
    }
  EXPECT_EQ(zero_rows, 99);
}

TEST(CliSweep, SinglePointMatchesDof) {
  Result sweep = run({"sweep", "--mode", "alpha", "--sum", "3", "--beta", "1/2", "--grid", "0.5"});
  Result dof = run({"dof", "--t_t", "2", "--t_r", "1", "--k_r", "3", "--alpha", "0.5", "--csv"});
  EXPECT_EQ(sweep.code, 0);
  EXPECT_EQ(sweep.out, dof.out);
}

TEST(CliSweep, EmptyGridAndAtomicOutput) {
  const auto path = temp_path("empty.csv");
  std::filesystem::remove(path);
  Result r = run({"sweep", "--mode", "alpha", "--sum", "3", "--out", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));

  Result ok = run({"sweep", "--preset", "alpha-curves", "--out", path.string()});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(ok.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run({"sweep", "--preset", "alpha-curves"}).out);
  std::filesystem::remove(path);
}

TEST(CliSimulate, FullRegime) {
  Result r = run({"simulate", "--regime", "full", "--k_t", "2", "--k_r", "3", "--n", "3", "--t_t", "2", "--t_r", "1",
                  "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["empirical_dof"], "3/1");
  EXPECT_EQ(j["decoded_ok"], nlohmann::json({true, true, true}));
}

TEST(CliSimulate, DelayedRegime) {
  Result r = run({"simulate", "--regime", "delayed", "--k_t", "2", "--k_r", "2", "--n", "2", "--t_t", "2", "--t_r",
                  "0", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["empirical_dof"], "4/3");
}

TEST(CliSimulate, MixedAtAlphaZeroEqualsFull) {
  std::vector<std::string> base{"--k_t", "2", "--k_r", "3", "--n", "3", "--t_t", "2", "--t_r", "1", "--seed", "7"};
  std::vector<std::string> full{"simulate", "--regime", "full"}, mixed{"simulate", "--regime", "mixed", "--alpha", "0"};
  full.insert(full.end(), base.begin(), base.end());
  mixed.insert(mixed.end(), base.begin(), base.end());
  auto jf = nlohmann::json::parse(run(full).out);
  auto jm = nlohmann::json::parse(run(mixed).out);
  ASSERT_TRUE(jm.contains("mixed"));
  jm.erase("mixed");
  EXPECT_EQ(jf, jm);
}

TEST(CliSimulate, DivisibilityExitCode) {
  Result r = run({"simulate", "--regime", "delayed", "--k_t", "3", "--k_r", "4", "--n", "4", "--t_t", "3", "--t_r",
                  "1", "--batch", "4"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("required batch multiple: 3"), std::string::npos) << r.err;
}

TEST(CliSimulate, RejectsNonSimulatable) {
  Result r = run({"simulate", "--k_t", "2", "--k_r", "2", "--n", "2", "--t_t", "2", "--t_r", "1"});
  EXPECT_EQ(r.code, 2);
}

TEST(CliSimulate, ConfigFileWithOverrides) {
  const auto path = temp_path("config.json");
  {
    std::ofstream f(path);
    f << R"({"k_t":2,"k_r":3,"n_files":3,"m_t":3,"m_r":1,"seed":7})";
  }
  Result a = run({"simulate", "--config", path.string()});
  Result b = run({"simulate", "--k_t", "2", "--k_r", "3", "--n", "3", "--t_t", "2", "--t_r", "1", "--seed", "7"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  Result c = run({"simulate", "--config", path.string(), "--t_r", "0"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(nlohmann::json::parse(c.out)["empirical_dof"], "2/1");
  std::filesystem::remove(path);
}

TEST(CliTrace, SlotCountAndVerify) {
  const auto path = temp_path("trace.jsonl");
  Result r = run({"trace", "--regime", "full", "--k_t", "2", "--k_r", "3", "--n", "3", "--t_t", "2", "--t_r", "1",
                  "--seed", "5", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string line;
  std::size_t slots = 0;
  while (std::getline(in, line))
    if (nlohmann::json::parse(line)["type"] == "slot") ++slots;
  EXPECT_EQ(slots, 2u);

  Result v = run({"trace", "--verify", path.string()});
  Result s = run({"simulate", "--regime", "full", "--k_t", "2", "--k_r", "3", "--n", "3", "--t_t", "2", "--t_r", "1",
                  "--seed", "5"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, s.out);
  std::filesystem::remove(path);
}

TEST(CliTrace, DeterministicDelayedTrace) {
  std::vector<std::string> args{"trace", "--regime", "delayed", "--k_t", "2", "--k_r", "3", "--n", "3",
                                "--t_t", "2", "--t_r", "1", "--seed", "3"};
  Result a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"phase\":2"), std::string::npos);
}
