/*
 Copyright 2026 The boxtraj Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "boxtraj/cli/commands.hpp"

using namespace boxtraj;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("boxtraj_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(std::vector<std::string> args, std::string* stdout_text = nullptr) {
  args.insert(args.begin(), "boxtraj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (stdout_text) *stdout_text = out.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

/// Linear dynamics whose reported df/du is off by a factor of two.
class WrongJacobianDynamics final : public DynamicsModel {
 public:
  Index state_dim() const override { return 2; }
  Index control_dim() const override { return 1; }
  VectorXd calc(const ConstVectorRef& x, const ConstVectorRef& u) const override {
    return (VectorXd(2) << x[0] + 0.1 * x[1], x[1] + 0.1 * u[0]).finished();
  }
  void calc_diff(const ConstVectorRef&, const ConstVectorRef&, MatrixXd& fx, MatrixXd& fu) const override {
    fx = (MatrixXd(2, 2) << 1.0, 0.1, 0.0, 1.0).finished();
    fu = (MatrixXd(2, 1) << 0.0, 0.2).finished();
  }
};

}  // namespace

TEST(Config, ParsesKeyValueText) {
  std::istringstream text("# comment\nproblem = pend\n\nmax_iter=42  # trailing\nspread = 0.1, 0.2\n");
  const auto kv = cli::parse_key_values(text);
  ASSERT_EQ(kv.size(), 3u);
  cli::RunConfig cfg;
  for (const auto& [k, v] : kv) cli::apply_setting(cfg, k, v);
  EXPECT_EQ(cfg.problem, "pend");
  EXPECT_EQ(cfg.settings.max_iter, 42);
  EXPECT_EQ(cfg.spread, (std::vector<double>{0.1, 0.2}));
}

TEST(Config, RejectsMalformedInput) {
  cli::RunConfig cfg;
  EXPECT_THROW(cli::apply_setting(cfg, "no_such_key", "1"), ConfigError);
  EXPECT_THROW(cli::apply_setting(cfg, "max_iter", "ten"), ConfigError);
  EXPECT_THROW(cli::apply_setting(cfg, "beta", "1.5x"), ConfigError);
  std::istringstream missing_eq("problem pend\n");
  EXPECT_THROW(cli::parse_key_values(missing_eq), ConfigError);
  cfg.variant = "newton";
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, InfinityIsAccepted) {
  cli::RunConfig cfg;
  cli::apply_setting(cfg, "lq_bound", "0.4");
  cli::apply_setting(cfg, "lq_bound", "inf");
  EXPECT_TRUE(std::isinf(cfg.lq_bound));
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path dir = fresh_dir("precedence");
  std::ofstream(dir / "run.cfg") << "problem = pend\nvariant = box-ddp\nmax_iter = 3\n";
  const int code = run({"solve", "--config", (dir / "run.cfg").string(), "--problem", "lq", "--variant", "fddp",
                        "--out-dir", dir.string()});
  EXPECT_EQ(code, 0);
  const auto summary = read_json(dir / "summary.json");
  EXPECT_EQ(summary["problem"], "lq");
  EXPECT_EQ(summary["variant"], "fddp");
}

TEST(Cli, ConfigFileValuesApplyWithoutFlags) {
  const fs::path dir = fresh_dir("config_only");
  std::ofstream(dir / "run.cfg") << "problem = pend\nvariant = box-fddp\nmax_iter = 3\nout_dir = "
                                 << dir.string() << "\n";
  EXPECT_EQ(run({"solve", "--config", (dir / "run.cfg").string()}), 2);
  const auto summary = read_json(dir / "summary.json");
  EXPECT_EQ(summary["problem"], "pend");
  EXPECT_EQ(summary["iterations"], 3);
}

TEST(Cli, UnknownProblemIsConfigError) {
  EXPECT_EQ(run({"solve", "--problem", "cartpole", "--out-dir", fresh_dir("unknown").string()}), 1);
}

TEST(Cli, MissingSubcommandOrBadFlagIsConfigError) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"solve", "--max-iter", "many"}), 1);
  EXPECT_EQ(run({"solve", "--no-such-flag"}), 1);
}

TEST(Cli, BoundedVariantOnUnboundedProblemIsConfigError) {
  const fs::path dir = fresh_dir("needs_bounds");
  EXPECT_EQ(run({"solve", "--problem", "lq", "--variant", "box-fddp", "--out-dir", dir.string()}), 1);
  EXPECT_EQ(run({"solve", "--problem", "lq", "--variant", "squash", "--out-dir", dir.string()}), 1);
}

TEST(Cli, LqSolveConvergesInFewIterations) {
  const fs::path dir = fresh_dir("lq");
  EXPECT_EQ(run({"solve", "--problem", "lq", "--variant", "fddp", "--out-dir", dir.string()}), 0);
  const auto summary = read_json(dir / "summary.json");
  EXPECT_TRUE(summary["converged"].get<bool>());
  EXPECT_LE(summary["iterations"].get<int>(), 3);
  EXPECT_NEAR(summary["final_cost"].get<double>(), 6.2781745149444035, 1e-6);
}

TEST(Cli, NotConvergedExitsTwo) {
  const fs::path dir = fresh_dir("budget");
  EXPECT_EQ(run({"solve", "--problem", "pend", "--max-iter", "2", "--out-dir", dir.string()}), 2);
}

TEST(Cli, CsvLogHasHeaderAndOneRowPerIteration) {
  const fs::path dir = fresh_dir("csv");
  run({"solve", "--problem", "quad-goal", "--nodes", "40", "--max-iter", "20", "--out-dir", dir.string()});
  const auto rows = lines(slurp(dir / "log.csv"));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), "iter,cost,gap_inf_norm,step_length,regularization,feasible,expected_dJ,actual_dJ");
  const auto summary = read_json(dir / "summary.json");
  EXPECT_EQ(static_cast<int>(rows.size()) - 1, summary["iterations"].get<int>());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), 7);
  }
}

TEST(Cli, SummaryJsonHasExactKeys) {
  const fs::path dir = fresh_dir("json");
  run({"solve", "--problem", "lq", "--variant", "ddp", "--out-dir", dir.string()});
  const auto summary = read_json(dir / "summary.json");
  std::vector<std::string> keys;
  for (const auto& item : summary.items()) keys.push_back(item.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"converged", "feasible", "final_cost", "iterations", "problem",
                                            "variant"}));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  for (const auto& d : {a, b}) {
    run({"solve", "--problem", "quad-narrow", "--nodes", "60", "--max-iter", "40", "--out-dir", d.string()});
  }
  EXPECT_EQ(slurp(a / "log.csv"), slurp(b / "log.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Cli, DegenerateSweepMatchesSolve) {
  const fs::path solve_dir = fresh_dir("sweep_solve");
  const fs::path sweep_dir = fresh_dir("sweep_one");
  const std::vector<std::string> common{"--problem", "lq", "--variant", "box-fddp", "--lq-bound", "0.4"};
  auto with = [&](std::vector<std::string> head, const fs::path& dir) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), {"--out-dir", dir.string()});
    return head;
  };
  const int solve_code = run(with({"solve"}, solve_dir));
  const int sweep_code = run(with({"sweep-init", "--n-starts", "1", "--spread", "0"}, sweep_dir));
  EXPECT_EQ(solve_code, sweep_code);
  EXPECT_EQ(slurp(solve_dir / "log.csv"), slurp(sweep_dir / "start_0_box-fddp.csv"));
  EXPECT_EQ(slurp(solve_dir / "summary.json"), slurp(sweep_dir / "start_0_box-fddp.json"));
}

TEST(Cli, SweepSpacesStartsEvenly) {
  const fs::path dir = fresh_dir("sweep_many");
  run({"sweep-init", "--problem", "quad-goal", "--nodes", "30", "--max-iter", "5", "--n-starts", "3",
       "--variants", "box-fddp,box-ddp", "--out-dir", dir.string()});
  const auto rows = lines(slurp(dir / "sweep.csv"));
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[1].substr(0, rows[1].find(",box")), "0,-0.89999999999999991");
  EXPECT_EQ(rows[3].substr(0, rows[3].find(",box")), "1,-0.29999999999999999");
  EXPECT_EQ(rows[5].substr(0, rows[5].find(",box")), "2,0.29999999999999999");
  EXPECT_TRUE(fs::exists(dir / "start_2_box-ddp.csv"));
}

TEST(Cli, SweepRejectsMismatchedSpread) {
  EXPECT_EQ(run({"sweep-init", "--problem", "lq", "--spread", "0.1,0.2,0.3", "--out-dir",
                 fresh_dir("bad_spread").string()}),
            1);
}

TEST(Cli, CheckDerivsPassesOnBuiltInProblems) {
  for (const char* problem : {"lq", "pend", "quad-goal", "quad-narrow"}) {
    std::string text;
    EXPECT_EQ(run({"check-derivs", "--problem", problem}, &text), 0) << problem;
    EXPECT_NE(text.find("PASS"), std::string::npos);
  }
}

TEST(Cli, CorruptedJacobianFailsDerivativeCheck) {
  auto dyn = std::make_shared<WrongJacobianDynamics>();
  auto cost = std::make_shared<QuadraticCost>(MatrixXd::Identity(2, 2), VectorXd::Zero(2),
                                              MatrixXd::Identity(1, 1), VectorXd::Zero(1));
  std::vector<ShootingNode> nodes(5, ShootingNode{dyn, cost});
  const ShootingProblem p(VectorXd::Zero(2), nodes, QuadraticCost::terminal(MatrixXd::Identity(2, 2),
                                                                               VectorXd::Zero(2)));
  const DerivativeReport report = check_problem_derivatives(p, 0);
  EXPECT_GT(report.max_rel_error.at("fu"), 1e-2);
  EXPECT_LT(report.max_rel_error.at("fx"), 1e-8);
  std::ostringstream out;
  EXPECT_EQ(cli::report_derivatives(report, out), 3);
  EXPECT_NE(out.str().find("FAIL"), std::string::npos);
}

TEST(Cli, CompareOnLqAgreesAcrossVariants) {
  const fs::path dir = fresh_dir("compare");
  std::string table;
  EXPECT_EQ(run({"compare", "--problem", "lq", "--lq-bound", "1000", "--variants", "ddp,fddp,box-ddp,box-fddp",
                 "--out-dir", dir.string()},
                &table),
            0);
  const auto rows = lines(slurp(dir / "compare.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.front(), "variant,converged,iterations,final_cost,feasible");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> fields;
    std::stringstream ss(rows[i]);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    const double cost = std::stod(fields.at(3));
    EXPECT_NEAR(cost, 6.2781745149444035, 1e-6) << rows[i];
  }
  EXPECT_EQ(lines(table).size(), 5u);
  EXPECT_TRUE(fs::exists(dir / "box-ddp.csv"));
}

TEST(Cli, CompareDefaultsFollowBounds) {
  const auto lq = cli::build_problem(cli::RunConfig{});
  EXPECT_EQ(cli::default_variants(lq), (std::vector<std::string>{"ddp", "fddp"}));
  cli::RunConfig pend;
  pend.problem = "pend";
  EXPECT_EQ(cli::default_variants(cli::build_problem(pend)).size(), 5u);
}
