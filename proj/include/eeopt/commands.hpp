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

#ifndef EEOPT_COMMANDS_HPP_
#define EEOPT_COMMANDS_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eeopt/run_config.hpp"

namespace eeopt {

enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,  // replay produced different tables
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitSolverFailure = 4,
};

struct CommandOptions {
  std::optional<Command> command;  // overrides the config's command
  std::optional<std::string> output_directory;
  std::ostream* log = nullptr;  // progress and errors; stderr when null
};

struct CommandOutcome {
  int exit_code = kExitOk;
  std::string record_path;          // structured record (JSON)
  std::vector<std::string> tables;  // flat CSV tables, file names only
};

// Runs an already-parsed config and writes its tables plus "<command>.json".
CommandOutcome execute(const RunConfig& config, const CommandOptions& options);

// Loads the config (or a previously emitted record), applies the dotted
// overrides and runs it. Config and I/O problems map to kExitConfig.
CommandOutcome run_command(const std::string& config_path,
                           const std::vector<std::string>& overrides,
                           const CommandOptions& options = {});

// Re-runs an emitted record into `output_directory` and compares every table
// it lists byte for byte with the copies next to the record.
CommandOutcome replay(const std::string& record_path,
                      const std::string& output_directory,
                      const CommandOptions& options = {});

}  // namespace eeopt

#endif  // EEOPT_COMMANDS_HPP_
