// Copyright 2026 The eeopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EEOPT_RUN_CONFIG_HPP_
#define EEOPT_RUN_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eeopt/network.hpp"
#include "eeopt/scalarization.hpp"
#include "eeopt/scenario.hpp"
#include "eeopt/sco.hpp"

namespace eeopt {

enum class Command { Solve, Pareto, Trend, Convergence };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

/// Everything a CLI invocation needs, in SI units.
///
/// Exactly one of `scenario` / `instance` is set. Physical quantities in the
/// JSON form accept unit strings ("23 dBm", "500 kHz", "-174 dBm/Hz", "3 dB",
/// "20 m"); bare numbers are SI.
struct RunConfig {
  Command command = Command::Solve;
  std::optional<ScenarioConfig> scenario;
  std::optional<NetworkInstance> instance;
  Scalarization scalarization;
  SolverConfig solver;
  double initial_scale = 1.0;  // start at initial_scale * P_max / K
  std::uint64_t seed = 1;
  int trials = 1000;
  int threads = 0;

  // pareto
  std::vector<double> w_grid;  // explicit grid, else w_points
  int w_points = 21;
  bool include_product_ee = false;
  // trend
  std::vector<double> d2d_distances = {10.0, 20.0, 40.0, 80.0};
  std::vector<double> trend_weights = {0.0, 0.5, 1.0};
  // convergence
  std::vector<double> convergence_weights = {0.0, 0.7, 1.0};
  std::vector<double> zetas = {0.1, 0.5, 1.0};
  std::vector<double> epsilons = {1e-3, 1e-4};

  std::string output_directory = "eeopt_out";

  std::vector<double> resolved_w_grid() const;
};

// Throws ConfigError naming the dotted path of the offending field.
RunConfig parse_run_config(const nlohmann::json& doc);

// Resolved config (all SI numbers); parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

// "a.b.c=value": value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// Reads a config file (or an emitted record, whose "config" member is used)
// and applies the overrides in order.
nlohmann::json load_config_document(const std::string& path,
                                    const std::vector<std::string>& overrides);

}  // namespace eeopt

#endif  // EEOPT_RUN_CONFIG_HPP_
