#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using permsft::cli::run_cli;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST(Cli, EntropyTwoPointBracket) {
  const auto r = run({"entropy", "--inline", "[0, 1]", "--windows", "1..8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["transfer"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["certified_upper"].get<double>(), 0.0, 1e-12);
  // Window rows: (1/n) log 2 for the admissible count 2.
  for (const auto& row : j["rows"]) {
    if (row["quantity"] == "per" && row["window"] == "box 8") EXPECT_NEAR(row["normalized"].get<double>(), std::log(2.0) / 8, 1e-12);
  }
}

TEST(Cli, EntropyTrivialSupport) {
  const auto r = run({"entropy", "--inline", "[0]", "--windows", "1..4", "--no-mahler"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["transfer"].get<double>(), 0.0);
  for (const auto& row : j["rows"]) {
    if (row["kind"] == "upper") EXPECT_EQ(row["normalized"].get<double>(), 0.0);
  }
}

TEST(Cli, EntropyNearestNeighbourBounds) {
  const auto r = run({"entropy", "--inline", "[[-1,0],[1,0],[0,-1],[0,1]]", "--windows", "1..3", "--tori", "3x3,4x4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["bound_lower"].get<double>(), std::log(4.0) - 1.0, 1e-11);
  EXPECT_NEAR(j["bound_upper"].get<double>(), std::log(24.0) / 4.0, 1e-11);
  EXPECT_EQ(j["torus_lower_label"], "heuristic-lower");
}

TEST(Cli, PressureGoldenAndScaling) {
  const auto r = run({"pressure", "--inline", "[0, 1, 2]", "--windows", "12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["transfer"].get<double>(), 0.481211825060, 1e-11);
  const auto s = run({"pressure", "--inline", R"({"dim":1,"terms":[{"exp":[0],"coef":3.5}]})", "--windows", "1..3"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NEAR(json::parse(s.out)["transfer"].get<double>(), std::log(3.5), 1e-11);
  const auto t = run({"pressure", "--inline", R"({"dim":1,"terms":[{"exp":[0],"coef":2},{"exp":[1],"coef":2},{"exp":[2],"coef":2}]})",
                      "--windows", "4"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NEAR(json::parse(t.out)["transfer"].get<double>(), 0.481211825060 + std::log(2.0), 1e-11);
}

TEST(Cli, PermanentCounts) {
  const auto r = run({"permanent", "--inline", "[0, 1]", "--window", R"({"points": [[0], [1]]})", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "window,size,quantity,log_value,normalized,count,backend");
  EXPECT_EQ(lines[1].rfind("box 2,2,per,", 0), 0u) << lines[1];
  EXPECT_NE(lines[1].find(",2,frontier"), std::string::npos) << lines[1];
  EXPECT_NE(lines[2].find(",3,"), std::string::npos) << lines[2];
}

TEST(Cli, PeriodicZeroEntropy) {
  const auto r = run({"periodic", "--inline", "[0, 1]", "--tori", "4..12", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 10u);
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_EQ(lines[i].substr(lines[i].rfind(',') + 1), "2") << lines[i];
}

TEST(Cli, PeriodicGoldenCounts) {
  const auto r = run({"periodic", "--inline", "[0, 1, 2]", "--tori", "14"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)[0]["count"].get<std::uint64_t>(), 845u);
}

TEST(Cli, MahlerJensen) {
  const auto r = run({"mahler", "--inline", R"({"dim":1,"terms":[{"exp":[2],"coef":1},{"exp":[1],"coef":1},{"exp":[0],"coef":-1}]})"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.481211825060, 1e-8);
  EXPECT_NEAR(j["jensen"].get<double>(), 0.481211825060, 1e-11);
}

TEST(Cli, CompareDimerRow) {
  const auto r = run({"compare", "--family", "dimer", "--windows", "3", "--tori", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "family,params,per_estimate_low,per_estimate_high,det_value,det_error_estimate");
  EXPECT_EQ(lines[1].substr(0, 15), "dimer,a=1;b=1,0");
}

TEST(Cli, CompareParameters) {
  const auto r = run({"compare", "--family", "trinomial-Z", "--params", "a=1;c=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("trinomial-Z,a=1;b=1;c=3,"), std::string::npos) << r.out;
  EXPECT_EQ(run({"compare", "--family", "trinomial-Z", "--params", "z=1"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"compare", "--family", "no-such-family"}).code, permsft::cli::kUsage);
}

TEST(Cli, CsvIsDeterministicAcrossThreads) {
  const std::vector<std::string> base{"pressure", "--inline", "[0, 1, 3]", "--windows", "1..9", "--tori", "8..11", "--format", "csv"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four), c = run(four);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
}

TEST(Cli, CapacityExitCode) {
  const auto r = run({"permanent", "--inline", "[0, 1, 2, 3]", "--windows", "3..9", "--backend", "backtracking", "--budget", "200",
                      "--format", "csv"});
  EXPECT_EQ(r.code, permsft::cli::kCapacity);
  // Partial output: small windows still have values.
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 15u);
  EXPECT_EQ(lines[1].find("nan"), std::string::npos);
  EXPECT_NE(lines.back().find("nan"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"entropy"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"entropy", "--inline", "{not json"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"entropy", "--inline", "[0,1]", "--windows", "5..2"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"entropy", "--inline", "[0,1]", "--format", "xml"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"periodic", "--inline", "[0,1]"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"periodic", "--inline", "[0,3]", "--tori", "3"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"entropy", "--inline", "[[0,0]]", "--dim", "1"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"permanent", "--inline", "[0,1]", "--backend", "magic"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"mahler", "--inline", "[0,1]", "--grid", "2"}).code, permsft::cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, VerifySeedCorpus) {
  const auto r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  const auto with_input = run({"verify", "--inline", R"({"dim":1,"terms":[{"exp":[0],"coef":1.5},{"exp":[2],"coef":-0.5}]})",
                               "--format", "json"});
  EXPECT_EQ(with_input.code, 0) << with_input.out;
  bool saw_input = false;
  for (const auto& line : json::parse(with_input.out)) saw_input = saw_input || line["subject"] == "input";
  EXPECT_TRUE(saw_input);
}
