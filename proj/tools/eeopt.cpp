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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eeopt/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficient power allocation via sequential convex optimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::optional<eeopt::Command> command;

  const auto add_run = [&](const std::string& name, const std::string& help,
                           std::optional<eeopt::Command> forced) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "JSON config or emitted record")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override a config key: dotted.path=value")
        ->take_all();
    sub->add_option("-o,--output", output, "output directory");
    sub->callback([&command, forced] { command = forced; });
  };
  add_run("run", "run the command named in the config", std::nullopt);
  add_run("solve", "solve one instance", eeopt::Command::Solve);
  add_run("pareto", "sweep the weight over the Pareto front", eeopt::Command::Pareto);
  add_run("trend", "sweep D2D distance and weight", eeopt::Command::Trend);
  add_run("convergence", "record convergence trajectories",
          eeopt::Command::Convergence);

  std::string record_path;
  std::string replay_dir;
  CLI::App* rp = app.add_subcommand(
      "replay", "re-run an emitted record and compare its tables byte for byte");
  rp->add_option("record", record_path, "record written by a previous run")
      ->required()
      ->check(CLI::ExistingFile);
  rp->add_option("-o,--output", replay_dir, "directory for the replayed tables")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return eeopt::kExitConfig;
  }

  if (rp->parsed()) {
    const auto out = eeopt::replay(record_path, replay_dir);
    if (out.exit_code == eeopt::kExitOk) std::cout << "replay identical\n";
    return out.exit_code;
  }

  eeopt::CommandOptions options;
  options.command = command;
  if (!output.empty()) options.output_directory = output;
  const auto out = eeopt::run_command(config_path, overrides, options);
  if (!out.record_path.empty()) std::cout << out.record_path << '\n';
  return out.exit_code;
}
