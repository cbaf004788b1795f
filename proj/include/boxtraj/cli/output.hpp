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

#ifndef BOXTRAJ_CLI_OUTPUT_HPP_
#define BOXTRAJ_CLI_OUTPUT_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include "json.hpp"

#include "boxtraj/core/errors.hpp"
#include "boxtraj/solver/types.hpp"

namespace boxtraj::cli {

inline constexpr const char* kLogHeader =
    "iter,cost,gap_inf_norm,step_length,regularization,feasible,expected_dJ,actual_dJ";

/// Round-trip decimal form of a double.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_log_csv(std::ostream& os, const SolverLog& log) {
  os << kLogHeader << '\n';
  for (const auto& r : log.records()) {
    os << r.iter << ',' << fmt_double(r.cost) << ',' << fmt_double(r.gap_inf_norm) << ','
       << fmt_double(r.step_length) << ',' << fmt_double(r.regularization) << ','
       << (r.feasible ? 1 : 0) << ',' << fmt_double(r.expected_dJ) << ',' << fmt_double(r.actual_dJ) << '\n';
  }
}

inline nlohmann::ordered_json summary_json(const Solution& sol, const std::string& variant,
                                           const std::string& problem) {
  nlohmann::ordered_json j;
  j["converged"] = sol.converged;
  j["iterations"] = sol.iterations;
  j["final_cost"] = sol.cost;
  j["feasible"] = sol.feasible;
  j["variant"] = variant;
  j["problem"] = problem;
  return j;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

inline void write_run(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                      const Solution& sol, const std::string& variant, const std::string& problem) {
  auto csv = open_output(csv_path);
  write_log_csv(csv, sol.log);
  auto json = open_output(json_path);
  json << summary_json(sol, variant, problem).dump(2) << '\n';
}

}  // namespace boxtraj::cli

#endif  // BOXTRAJ_CLI_OUTPUT_HPP_
