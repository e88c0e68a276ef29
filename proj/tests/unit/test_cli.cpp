#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sldp;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sldp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

std::string tmp(const std::string& name) { return (fs::temp_directory_path() / ("sldp_cli_" + name)).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(Grid, ParsesInclusiveRange) {
  const auto g = cli::parse_grid("-1:1:0.5");
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  EXPECT_EQ(cli::parse_grid("0:0.3:0.1").size(), 4u);
  EXPECT_THROW(cli::parse_grid("1:0:0.1"), ValidationError);
  EXPECT_THROW(cli::parse_grid("0:1:0"), ValidationError);
  EXPECT_THROW(cli::parse_grid("0:1"), ValidationError);
  EXPECT_EQ(cli::parse_vector("1,0.5,-2").size(), 3);
  EXPECT_THROW(cli::parse_vector("1,x"), ValidationError);
}

TEST(Cli, RateQuenchedGaussianCurve) {
  const std::string out = tmp("rq.csv");
  ASSERT_EQ(run_cli({"rate-quenched", "--family", "product-gaussian", "--k", "2", "--nu", "standard", "--grid",
                     "-2:2:0.1", "--out", out}),
            0);
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("# sldp spec_hash=", 0), 0u);
  const auto rows = data_lines(text);
  ASSERT_EQ(rows.size(), 42u);
  EXPECT_EQ(rows[0], "x1,x2,rate,converged,tau,t1_1,t1_2,t2");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string x1, x2, rate;
    std::getline(ss, x1, ',');
    std::getline(ss, x2, ',');
    std::getline(ss, rate, ',');
    EXPECT_NEAR(std::stod(rate), 0.5 * std::stod(x1) * std::stod(x1), 1e-6) << rows[i];
  }
}

TEST(Cli, ByteIdenticalReruns) {
  const std::string a = tmp("rep.csv");
  const std::vector<std::string> args{"verify-ldp", "--family", "cone-lp", "--p", "3", "--k", "1",
                                      "--threshold", "0.3", "--n-grid", "20,40", "--samples", "3000",
                                      "--tilt", "--seed", "5", "--out", a};
  ASSERT_EQ(run_cli(args), 0);
  const std::string first = slurp(a);
  ASSERT_EQ(run_cli(args), 0);
  EXPECT_EQ(first, slurp(a));
  EXPECT_EQ(data_lines(first).size(), 3u);
}

TEST(Cli, VarFormulaGaussian) {
  const std::string out = tmp("vf.json");
  ASSERT_EQ(run_cli({"var-formula", "--x", "1,0", "--out", out}), 0);
  const Json j = parse_json(slurp(out));
  EXPECT_NEAR(j["jan"].get<double>(), 0.5, 1e-4);
  EXPECT_NEAR(j["rhsUpper"].get<double>(), 0.5, 1e-5);
  EXPECT_TRUE(j.contains("meta"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"rate-quenched", "--grid", "1:0:0.1", "--out", tmp("e.csv")}), 2);
  EXPECT_EQ(run_cli({"rate-quenched", "--grid", "0:1:0.5", "--bogus", "1"}), 2);
  EXPECT_EQ(run_cli({"launch"}), 2);
  EXPECT_EQ(run_cli({"rate-quenched", "--family", "cone-lp", "--grid", "0:1:0.5"}), 2);  // p missing
  EXPECT_EQ(run_cli({"verify-ldp", "--k", "1", "--threshold", "1", "--n-grid", "1600", "--samples", "100",
                     "--out", tmp("refuse.csv")}),
            2);
  EXPECT_EQ(run_cli({"rate-quenched", "--grid", "0:1:0.5", "--out", "/nonexistent-dir/x.csv"}), 1);
}

TEST(Cli, NonConvergedPointExitsThree) {
  const std::string out = tmp("nc.csv");
  EXPECT_EQ(run_cli({"rate-quenched", "--family", "cone-lp", "--p", "3", "--x", "0.6", "--solver",
                     R"({"maxIter": 1})", "--out", out}),
            3);
  const auto rows = data_lines(slurp(out));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[1].find(",false,"), std::string::npos) << rows[1];
}

TEST(Cli, SpecFileOverridesFlags) {
  const std::string spec = tmp("spec.json");
  const std::string out = tmp("spec_out.csv");
  std::ofstream(spec) << R"({"command": "rate-quenched", "seed": 77, "family": {"kind": "product-gaussian"},
                            "parameters": {"k": 1, "grid": "0:1:0.25"}})";
  ASSERT_EQ(run_cli({"rate-quenched", "--grid", "0:2:1", "--seed", "3", "--spec", spec, "--out", out}), 0);
  const auto text = slurp(out);
  EXPECT_NE(text.find("seed=77"), std::string::npos);
  EXPECT_EQ(data_lines(text).size(), 6u);

  std::ofstream(spec) << "{\"command\": \"slln\",\n \"seed\": }";
  EXPECT_EQ(run_cli({"rate-quenched", "--spec", spec}), 2);
}

TEST(Cli, SpecRoundTripsThroughHeader) {
  // The header carries the complete effective spec; replaying it reproduces the output.
  const std::string out = tmp("rt.csv"), replay = tmp("rt_replay.csv"), spec = tmp("rt.json");
  ASSERT_EQ(run_cli({"slln", "--k", "2", "--n-grid", "50,100", "--repeats", "2", "--seed", "9", "--out", out}), 0);
  const auto text = slurp(out);
  const auto pos = text.find("spec=");
  ASSERT_NE(pos, std::string::npos);
  Json j = parse_json(text.substr(pos + 5, text.find('\n') - pos - 5));
  j["output"] = replay;
  std::ofstream(spec) << j.dump();
  ASSERT_EQ(run_cli({"slln", "--spec", spec}), 0);
  EXPECT_EQ(data_lines(text), data_lines(slurp(replay)));
}
