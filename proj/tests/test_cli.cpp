#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(PRIVCACHE_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

}  // namespace

TEST(Cli, SimulateWorkedExample) {
  const auto o = run("simulate --N 5 --K 2 --L 2 --r 1 --seed 7");
  ASSERT_EQ(o.code, 0);
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["M"]["num"], "5");
  EXPECT_EQ(j["M"]["den"], "4");
  EXPECT_EQ(j["R"]["num"], "11");
  EXPECT_EQ(j["R"]["den"], "4");
  EXPECT_TRUE(j["all_correct"].get<bool>());
}

TEST(Cli, SimulateRZero) {
  const auto o = run("simulate --N 5 --K 2 --L 2 --r 0 --seed 3");
  ASSERT_EQ(o.code, 0);
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["M"]["num"], "0");
  EXPECT_EQ(j["R"]["num"], "4");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("simulate --K 2 --L 2 --r 1").code, 2);
  EXPECT_EQ(run("simulate --N 5 --K 2 --L 2 --r 16").code, 2);
  EXPECT_EQ(run("simulate --N 5 --K 2 --L 2 --q 4").code, 2);
  EXPECT_EQ(run("simulate --N 5 --K 2 --L 2 --demand '0,0;1,2'").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("audit --N 2 --K 2 --L 1 --q 2 --F 5 --mode mi").code, 2);
  EXPECT_EQ(run("gap --sweep N=1..x").code, 2);
  EXPECT_EQ(run("tradeoff --N 2 --K 2 --L 3").code, 2);
}

TEST(Cli, AuditPtildeAndMi) {
  const auto p = run("audit --N 5 --K 2 --L 2 --mode ptilde --slots 0,2");
  ASSERT_EQ(p.code, 0);
  const auto j = nlohmann::json::parse(p.out);
  EXPECT_EQ(j["ptilde"]["invariance"]["max_discrepancy"]["num"], "0");
  const auto mi = run("audit --N 2 --K 2 --L 1 --q 2 --F 4 --mode mi");
  ASSERT_EQ(mi.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(mi.out)["mi"]["exactly_zero"].get<bool>());
}

TEST(Cli, AuditFailuresAndBudget) {
  EXPECT_EQ(run("audit --N 2 --K 2 --L 1 --q 2 --F 4 --mode mi --mutate fixed-slots").code, 1);
  EXPECT_EQ(run("audit --N 5 --K 2 --L 2 --mode ptilde --mutate identity-permutation").code, 1);
  EXPECT_EQ(run("audit --N 6 --K 4 --mode mi").code, 3);
  EXPECT_EQ(run("audit --N 5 --K 2 --L 2 --mode ptilde --budget 100").code, 3);
}

TEST(Cli, TradeoffCsvContainsWorkedExample) {
  const auto o = run("tradeoff --N 5 --K 2 --L 2 --format csv");
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.rfind("M_num,M_den,R_num,R_den,provenance\n", 0), 0u);
  EXPECT_NE(o.out.find("\n5,4,11,4,achievable r=1\n"), std::string::npos);
}

TEST(Cli, GapSweepAndDegenerate) {
  const auto sweep = run("gap --sweep N=1..8,K=1..4 --threads 3");
  ASSERT_EQ(sweep.code, 0);
  const auto j = nlohmann::json::parse(sweep.out);
  EXPECT_TRUE(j["all_within_six"].get<bool>());
  EXPECT_EQ(j["count"], 144);
  const auto single = run("gap --N 2 --K 1 --L 1");
  ASSERT_EQ(single.code, 0);
  EXPECT_EQ(nlohmann::json::parse(single.out)["max_ratio"]["num"], "1");
}

TEST(Cli, OutputIsByteIdentical) {
  for (const char* args : {"simulate --N 5 --K 2 --L 2 --r 2 --seed 11 --runs 3",
                           "simulate --N 4 --K 3 --L 1 --r 2 --seed 5 --format csv --runs 5",
                           "tradeoff --N 6 --K 3 --L 2", "gap --sweep N=1..5,K=1..3 --threads 4"}) {
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
  EXPECT_NE(run("simulate --N 5 --K 2 --L 2 --seed 1").out, run("simulate --N 5 --K 2 --L 2 --seed 2").out);
}

TEST(Cli, WritesOutputFile) {
  const std::string path = ::testing::TempDir() + "privcache_trace.json";
  ASSERT_EQ(run("simulate --N 3 --K 2 --L 1 --r 1 --out " + path).code, 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_TRUE(nlohmann::json::parse(text.str())["all_correct"].get<bool>());
}
