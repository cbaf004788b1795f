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

#ifndef BOXTRAJ_CLI_COMMANDS_HPP_
#define BOXTRAJ_CLI_COMMANDS_HPP_

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "boxtraj/boxtraj.hpp"
#include "boxtraj/cli/config.hpp"
#include "boxtraj/cli/output.hpp"
#include "boxtraj/cli/registry.hpp"

namespace boxtraj::cli {

enum ExitCode : int { kOk = 0, kConfigFailure = 1, kNotConverged = 2, kDerivativeFailure = 3 };

inline constexpr double kDerivativeTolerance = 1e-5;
inline constexpr int kDerivativePoints = 50;

/// Default logger on stderr, level from BOXTRAJ_LOG_LEVEL (trace .. off), info otherwise.
inline void init_logging() {
  auto logger = std::make_shared<spdlog::logger>("boxtraj", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::info;
  if (const char* env = std::getenv("BOXTRAJ_LOG_LEVEL")) {
    const auto parsed = spdlog::level::from_str(env);
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

inline int exit_for(bool converged) { return converged ? kOk : kNotConverged; }

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ShootingProblem p = build_problem(cfg);
  const Solution sol = run_variant(p, cfg.variant, cfg);
  const std::filesystem::path dir(cfg.out_dir);
  write_run(dir / "log.csv", dir / "summary.json", sol, cfg.variant, cfg.problem);
  spdlog::info("{} on {}: {} after {} iterations, cost {:.10g}", cfg.variant, cfg.problem,
               sol.converged ? "converged" : "not converged", sol.iterations, sol.cost);
  out << summary_json(sol, cfg.variant, cfg.problem).dump() << '\n';
  return exit_for(sol.converged);
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const ShootingProblem p = build_problem(cfg);
  const std::vector<std::string> variants = cfg.variants.empty() ? default_variants(p) : cfg.variants;
  const std::filesystem::path dir(cfg.out_dir);
  auto table = open_output(dir / "compare.csv");
  table << "variant,converged,iterations,final_cost,feasible\n";
  out << std::left << std::setw(10) << "variant" << std::setw(11) << "converged" << std::setw(12)
      << "iterations" << std::setw(26) << "final_cost" << "feasible\n";
  bool all_converged = true;
  for (const auto& v : variants) {
    const Solution sol = run_variant(p, v, cfg);
    write_run(dir / (v + ".csv"), dir / (v + ".json"), sol, v, cfg.problem);
    table << v << ',' << (sol.converged ? 1 : 0) << ',' << sol.iterations << ',' << fmt_double(sol.cost) << ','
          << (sol.feasible ? 1 : 0) << '\n';
    out << std::left << std::setw(10) << v << std::setw(11) << (sol.converged ? "yes" : "no") << std::setw(12)
        << sol.iterations << std::setw(26) << fmt_double(sol.cost) << (sol.feasible ? "yes" : "no") << '\n';
    all_converged = all_converged && sol.converged;
  }
  return exit_for(all_converged);
}

/// Solves every (start, variant) pair concurrently; files are written in start order afterwards.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const ShootingProblem base = build_problem(cfg);
  const std::vector<std::string> variants = cfg.variants.empty() ? std::vector{cfg.variant} : cfg.variants;
  const auto starts = sweep_starts(base.initial_state(), sweep_spread(cfg, base.initial_state().size()),
                                   cfg.n_starts);

  std::vector<std::future<Solution>> jobs;
  for (const auto& x0 : starts) {
    for (const auto& v : variants) {
      jobs.push_back(std::async(std::launch::async, [&cfg, p = base.with_initial_state(x0), v] {
        return run_variant(p, v, cfg);
      }));
    }
  }

  const std::filesystem::path dir(cfg.out_dir);
  auto table = open_output(dir / "sweep.csv");
  table << "start,x0_0,variant,converged,iterations,final_cost,feasible\n";
  bool all_converged = true;
  std::size_t job = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (const auto& v : variants) {
      const Solution sol = jobs[job++].get();
      const std::string stem = "start_" + std::to_string(i) + "_" + v;
      write_run(dir / (stem + ".csv"), dir / (stem + ".json"), sol, v, cfg.problem);
      table << i << ',' << fmt_double(starts[i][0]) << ',' << v << ',' << (sol.converged ? 1 : 0) << ','
            << sol.iterations << ',' << fmt_double(sol.cost) << ',' << (sol.feasible ? 1 : 0) << '\n';
      all_converged = all_converged && sol.converged;
    }
  }
  out << "sweep: " << jobs.size() << " runs, " << (all_converged ? "all converged" : "some not converged")
      << '\n';
  return exit_for(all_converged);
}

inline int report_derivatives(const DerivativeReport& report, std::ostream& out) {
  for (const auto& [block, err] : report.max_rel_error) {
    out << std::left << std::setw(6) << block << fmt_double(err) << '\n';
  }
  const bool ok = report.worst() < kDerivativeTolerance;
  out << (ok ? "PASS" : "FAIL") << " worst relative error " << fmt_double(report.worst()) << '\n';
  return ok ? kOk : kDerivativeFailure;
}

inline int cmd_check_derivs(const RunConfig& cfg, std::ostream& out) {
  const ShootingProblem p = build_problem(cfg);
  DerivativeReport report = check_problem_derivatives(p, static_cast<std::uint64_t>(cfg.seed));
  if (p.bounds() && p.bounds()->all_finite()) {
    report.merge(check_problem_derivatives(problems::wrap_squashed(p, cfg.beta),
                                           static_cast<std::uint64_t>(cfg.seed) + 1));
  }
  return report_derivatives(report, out);
}

/// Full command line: `boxtraj <solve|compare|sweep-init|check-derivs> [options]`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Box-constrained feasibility-driven DDP solvers"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  std::vector<std::string> overrides;
  auto add_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key = value configuration file");
    const std::vector<std::pair<std::string, std::string>> keyed{
        {"--problem", "problem"},   {"--variant", "variant"},     {"--variants", "variants"},
        {"--max-iter", "max_iter"}, {"--seed", "seed"},           {"--out-dir", "out_dir"},
        {"--n-starts", "n_starts"}, {"--spread", "spread"},       {"--beta", "beta"},
        {"--nodes", "nodes"},       {"--lq-bound", "lq_bound"},   {"--quad-start-x", "quad_start_x"}};
    for (const auto& [flag, key] : keyed) {
      sub->add_option_function<std::string>(flag, [&flags, key = key](const std::string& v) { flags[key] = v; },
                                            "sets config key " + key);
    }
    sub->add_option("--set", overrides, "extra key=value settings");
  };

  std::string command;
  for (const char* name : {"solve", "compare", "sweep-init", "check-derivs"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_options(sub);
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigFailure;
  }

  init_logging();
  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : flags) apply_setting(cfg, key, value);
    cfg.validate();

    if (command == "solve") return cmd_solve(cfg, out);
    if (command == "compare") return cmd_compare(cfg, out);
    if (command == "sweep-init") return cmd_sweep(cfg, out);
    return cmd_check_derivs(cfg, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const SquashError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return kNotConverged;
  }
}

}  // namespace boxtraj::cli

#endif  // BOXTRAJ_CLI_COMMANDS_HPP_
