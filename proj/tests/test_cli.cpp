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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eeopt/commands.hpp"
#include "eeopt/errors.hpp"
#include "eeopt/run_config.hpp"
#include "eeopt/scenario.hpp"

using namespace eeopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eeopt_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p.string();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

json single_user_instance(double min_rate) {
  return {{"bandwidth_per_block", 1.0},
          {"gain", {{{10.0}}}},
          {"noise", 1.0},
          {"static_power", 1.0},
          {"max_power", 10.0},
          {"min_rate", min_rate}};
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const RunConfig c = parse_run_config(json{{"command", "solve"}, {"scenario", json::object()}});
  CHECK(c.command == Command::Solve);
  REQUIRE(c.scenario.has_value());
  CHECK(c.scenario->n_d2d_pairs == 4);
  CHECK(c.trials == 1000);
  CHECK(c.solver.tolerance == 1e-3);
  CHECK(c.resolved_w_grid().size() == 21);
}

TEST_CASE("unit strings are converted on load") {
  const json doc = {{"command", "pareto"},
                    {"scenario",
                     {{"max_power", "23 dBm"},
                      {"static_power", "10 dBm"},
                      {"bandwidth_per_block", "500 kHz"},
                      {"noise_density", "-174 dBm/Hz"},
                      {"noise_figure", "3 dB"},
                      {"carrier_frequency", "5 GHz"},
                      {"d2d_distance", "0.04 km"}}}};
  const RunConfig c = parse_run_config(doc);
  CHECK(c.scenario->max_power == doctest::Approx(0.1995262315).epsilon(1e-9));
  CHECK(c.scenario->static_power == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(c.scenario->bandwidth_per_block == 500e3);
  CHECK(c.scenario->noise_density == doctest::Approx(3.981071705534973e-21).epsilon(1e-12));
  CHECK(c.scenario->noise_figure_db == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(c.scenario->d2d_distance == doctest::Approx(40.0));
}

TEST_CASE("config errors name the offending field") {
  const auto message = [](const json& doc) {
    try {
      parse_run_config(doc);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message({{"command", "solve"}, {"scenario", {{"max_powr", 1}}}})
            .find("scenario.max_powr") != std::string::npos);
  CHECK(message({{"command", "solve"}, {"scenario", {{"max_power", "23 dBx"}}}})
            .find("scenario.max_power") != std::string::npos);
  CHECK(message({{"command", "fly"}, {"scenario", json::object()}}).find("command") !=
        std::string::npos);
  CHECK(message({{"scenario", json::object()}}).find("command") != std::string::npos);
  CHECK(message({{"command", "solve"}}).find("scenario") != std::string::npos);
  CHECK(message({{"command", "solve"},
                 {"scenario", json::object()},
                 {"instance", single_user_instance(0.0)}})
            .find("exactly one") != std::string::npos);
  CHECK(message({{"command", "solve"},
                 {"scenario", json::object()},
                 {"scalarization", {{"kind", "wm"}, {"weight", 1.0}}}})
            .find("scalarization") != std::string::npos);
  CHECK(message({{"command", "solve"}, {"instance", {{"gain", {{{1.0, 2.0}}}}}}})
            .find("instance") != std::string::npos);
}

TEST_CASE("resolved config round-trips") {
  json doc = {{"command", "convergence"},
              {"scenario", {{"max_power", "20 dBm"}, {"shadowing_sigma", 4.0}}},
              {"scalarization", {{"kind", "wm"}, {"weight", 0.25}}},
              {"solver", {{"tolerance", 1e-4}, {"barrier", {{"tau_factor", 10}}}}},
              {"seed", 99},
              {"trials", 7},
              {"convergence", {{"zetas", {0.2, 0.9}}}}};
  const RunConfig a = parse_run_config(doc);
  const json resolved = to_json(a);
  const RunConfig b = parse_run_config(resolved);
  CHECK(to_json(b) == resolved);
  CHECK(b.scenario->max_power == a.scenario->max_power);
  CHECK(b.solver.barrier.tau_factor == 10.0);
  CHECK(b.zetas == std::vector<double>{0.2, 0.9});

  json inst = {{"command", "solve"},
               {"instance", single_user_instance(0.5)},
               {"solver", {{"initial_allocation", {{2.0}}}}}};
  const RunConfig c = parse_run_config(inst);
  REQUIRE(c.instance.has_value());
  CHECK(c.instance->min_rate(0) == 0.5);
  REQUIRE(c.solver.initial.has_value());
  CHECK((*c.solver.initial)(0, 0) == 2.0);
  CHECK(to_json(parse_run_config(to_json(c))) == to_json(c));
}

TEST_CASE("overrides use dotted paths") {
  json doc = {{"command", "solve"}, {"scenario", json::object()}};
  apply_override(doc, "trials=25");
  apply_override(doc, "scenario.max_power=20 dBm");
  apply_override(doc, "solver.barrier.tau_factor=15");
  apply_override(doc, "pareto.w_grid=[0, 0.5, 1]");
  CHECK(doc["trials"] == 25);
  CHECK(doc["scenario"]["max_power"] == "20 dBm");
  CHECK(doc["solver"]["barrier"]["tau_factor"] == 15);
  const RunConfig c = parse_run_config(doc);
  CHECK(c.trials == 25);
  CHECK(c.scenario->max_power == doctest::Approx(0.1));
  CHECK(c.resolved_w_grid().size() == 3);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "trials.x=1"), ConfigError);
}

TEST_CASE("solve on the defaults writes a monotone, feasible record") {
  const fs::path dir = scratch_dir("solve");
  const std::string cfg = write_config(
      dir, {{"command", "solve"},
            {"scenario", json::object()},
            {"scalarization", {{"kind", "wp"}, {"weight", 1.0}}},
            {"seed", 4}});
  std::ostringstream log;
  CommandOptions opt;
  opt.output_directory = (dir / "out").string();
  opt.log = &log;
  const CommandOutcome out = run_command(cfg, {}, opt);
  REQUIRE(out.exit_code == kExitOk);
  const json rec = read_json(out.record_path);
  CHECK(rec["partial"] == false);
  const auto traj = rec["results"]["trajectory"].get<std::vector<double>>();
  for (std::size_t l = 1; l < traj.size(); ++l) CHECK(traj[l] >= traj[l - 1] - 1e-9);
  CHECK(rec["results"]["feasible"] == true);

  // Independent feasibility check from the record contents.
  const RunConfig c = parse_run_config(rec["config"]);
  const NetworkInstance inst =
      generate(*c.scenario, rec["results"]["instance_seed"].get<std::uint64_t>());
  const auto rows = rec["results"]["allocation"].get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd p(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) p(i, k) = rows[i][k];
  }
  CHECK(is_feasible(inst, PowerAllocation(p), 1e-6).feasible);
  CHECK(evaluate(inst, PowerAllocation(p)).ee_total ==
        doctest::Approx(rec["results"]["metrics"]["tee"].get<double>()).epsilon(1e-12));

  const auto csv = read_csv(dir / "out" / "solve_trajectory.csv");
  CHECK(csv.size() == traj.size() + 1);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("exit");
  CommandOptions opt;
  std::ostringstream log;
  opt.log = &log;
  opt.output_directory = (dir / "out").string();

  CHECK(run_command((dir / "missing.json").string(), {}, opt).exit_code == kExitConfig);
  {
    std::ofstream(dir / "broken.json") << "{\"command\": ";
    CHECK(run_command((dir / "broken.json").string(), {}, opt).exit_code == kExitConfig);
  }
  const std::string bad_key =
      write_config(dir, {{"command", "solve"}, {"scenario", {{"bogus", 1}}}});
  CHECK(run_command(bad_key, {}, opt).exit_code == kExitConfig);
  CHECK(log.str().find("scenario.bogus") != std::string::npos);

  // Start below the rate floor.
  const std::string infeasible = write_config(
      dir, {{"command", "solve"},
            {"instance", single_user_instance(2.0)},
            {"solver", {{"initial_allocation", {{0.01}}}}}});
  CHECK(run_command(infeasible, {}, opt).exit_code == kExitInfeasible);

  // Floor equal to the full-power rate: feasible start, but no strictly
  // interior point for the first subproblem.
  const std::string stuck = write_config(
      dir, {{"command", "solve"},
            {"instance", single_user_instance(std::log2(101.0))},
            {"solver", {{"initial_allocation", {{10.0}}}}}});
  const CommandOutcome failed = run_command(stuck, {}, opt);
  CHECK(failed.exit_code == kExitSolverFailure);
  REQUIRE_FALSE(failed.record_path.empty());
  CHECK(read_json(failed.record_path)["partial"] == true);

  // Sweeps need a scenario.
  const std::string no_scenario =
      write_config(dir, {{"command", "pareto"}, {"instance", single_user_instance(0.0)}});
  CHECK(run_command(no_scenario, {}, opt).exit_code == kExitConfig);
}

TEST_CASE("pareto with a 21-point grid") {
  const fs::path dir = scratch_dir("pareto");
  const std::string cfg =
      write_config(dir, {{"command", "pareto"}, {"scenario", json::object()}});
  CommandOptions opt;
  opt.output_directory = (dir / "out").string();
  const CommandOutcome out = run_command(cfg, {"trials=50"}, opt);
  REQUIRE(out.exit_code == kExitOk);
  const auto rows = read_csv(dir / "out" / "pareto.csv");
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"w", "mee_mean", "mee_se", "tee_mean",
                                            "tee_se", "jfi_mean", "iters_mean",
                                            "trials", "seed"});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CHECK(std::stod(rows[r][3]) >= std::stod(rows[r][1]));
    CHECK(rows[r][7] == "50");
  }

  // Replaying the record reproduces every table byte for byte.
  const CommandOutcome again =
      replay(out.record_path, (dir / "replay").string(), CommandOptions{});
  CHECK(again.exit_code == kExitOk);
}

TEST_CASE("replay of every command is identical") {
  const fs::path dir = scratch_dir("replay");
  for (const char* cmd : {"solve", "trend", "convergence"}) {
    const std::string cfg = write_config(
        dir, {{"command", cmd},
              {"scenario", json::object()},
              {"trials", 3},
              {"trend", {{"d2d_distances", {10, 40}}}},
              {"convergence", {{"zetas", {0.5}}}}});
    CommandOptions opt;
    opt.output_directory = (dir / cmd).string();
    const CommandOutcome out = run_command(cfg, {}, opt);
    REQUIRE(out.exit_code == kExitOk);
    CHECK_FALSE(out.tables.empty());
    const CommandOutcome again =
        replay(out.record_path, (dir / (std::string(cmd) + "_replay")).string());
    CHECK(again.exit_code == kExitOk);
  }
  // A tampered table is detected.
  {
    std::ofstream f(dir / "solve" / "solve_trajectory.csv", std::ios::app);
    f << "tampered\n";
  }
  std::ostringstream log;
  CommandOptions quiet;
  quiet.log = &log;
  CHECK(replay((dir / "solve" / "solve.json").string(), (dir / "solve_again").string(),
               quiet)
            .exit_code == kExitMismatch);
}

TEST_CASE("command line front end") {
  const fs::path dir = scratch_dir("binary");
  const auto call = [&](const std::string& args) {
    const std::string cmd = std::string(EEOPT_CLI_PATH) + " " + args + " > " +
                            (dir / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(dir / "stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_pair(WEXITSTATUS(status), ss.str());
  };
  const auto [code, text] = call("launch");
  CHECK(code == 2);
  CHECK(text.find("Usage") != std::string::npos);

  const std::string cfg = write_config(
      dir, {{"command", "pareto"}, {"scenario", json::object()}, {"trials", 2}});
  const auto [code2, text2] =
      call("solve " + cfg + " --set scalarization.weight=0.3 -o " + (dir / "o").string());
  CHECK(code2 == 0);
  CHECK(fs::exists(dir / "o" / "solve.json"));
  const auto [code3, text3] = call("replay " + (dir / "o" / "solve.json").string() +
                                   " -o " + (dir / "o2").string());
  CHECK(code3 == 0);
  CHECK(text3.find("identical") != std::string::npos);
  const auto [code4, text4] = call("run " + cfg + " --set scenario.nope=1");
  CHECK(code4 == 2);
}
