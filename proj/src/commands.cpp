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

#include "eeopt/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "eeopt/errors.hpp"
#include "eeopt/scenario.hpp"
#include "eeopt/sweep.hpp"

namespace eeopt {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Short form for file names.
std::string tag(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

bool verbose() {
  const char* v = std::getenv("EEOPT_VERBOSE");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json metrics_json(const MetricsReport& m) {
  return {{"rate", vector_json(m.rate)},
          {"power", vector_json(m.power)},
          {"ee", vector_json(m.ee)},
          {"rate_total", m.rate_total},
          {"power_total", m.power_total},
          {"tee", m.ee_total},
          {"mee", m.ee_min},
          {"jfi", m.jain_index}};
}

json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"se", s.se}, {"count", s.count}};
}

json row_json(const SweepRow& r) {
  json outcomes = json::array();
  for (const TrialOutcome& t : r.outcomes) {
    json o = {{"seed", t.seed},           {"tee", t.tee},
              {"mee", t.mee},             {"jfi", t.jfi},
              {"objective", t.objective}, {"iterations", t.iterations},
              {"status", std::string(to_string(t.status))}};
    if (!t.trajectory.empty()) o["trajectory"] = t.trajectory;
    outcomes.push_back(o);
  }
  return {{"scalarization", r.scalarization},
          {"weight", r.weight},
          {"d2d_distance", r.d2d_distance},
          {"epsilon", r.epsilon},
          {"zeta", r.zeta},
          {"tee", summary_json(r.tee)},
          {"mee", summary_json(r.mee)},
          {"jfi", summary_json(r.jfi)},
          {"objective", summary_json(r.objective)},
          {"iterations", summary_json(r.iterations)},
          {"trials", r.trials},
          {"failures", r.failures},
          {"seed", r.seed},
          {"outcomes", outcomes}};
}

struct Context {
  const RunConfig& config;
  fs::path dir;
  std::ostream& log;
  CommandOutcome outcome;

  fs::path table(const std::string& name) {
    outcome.tables.push_back(name);
    if (verbose()) log << "writing " << (dir / name).string() << '\n';
    return dir / name;
  }

  void record(const json& results, bool partial) {
    json doc = {{"command", std::string(to_string(config.command))},
                {"config", to_json(config)},
                {"partial", partial},
                {"tables", outcome.tables},
                {"results", results}};
    const fs::path p = dir / (std::string(to_string(config.command)) + ".json");
    write_json(p, doc);
    outcome.record_path = p.string();
  }
};

HarnessOptions harness(const RunConfig& c) {
  HarnessOptions h;
  h.trials = c.trials;
  h.master_seed = c.seed;
  h.threads = c.threads;
  h.solver = c.solver;
  return h;
}

int sweep_exit(const SweepResult& r) {
  for (const SweepRow& row : r.rows) {
    if (row.failures > 0) return kExitSolverFailure;
  }
  return kExitOk;
}

json sweep_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) rows.push_back(row_json(row));
  return {{"trial_seeds", r.trial_seeds}, {"rows", rows}};
}

void write_trials(Context& ctx, const std::string& name, const SweepResult& r) {
  Csv csv(ctx.table(name), {"scalarization", "w", "d2d_distance", "epsilon",
                            "zeta", "trial", "seed", "tee", "mee", "jfi",
                            "objective", "iterations", "status"});
  for (const SweepRow& row : r.rows) {
    for (std::size_t t = 0; t < row.outcomes.size(); ++t) {
      const TrialOutcome& o = row.outcomes[t];
      csv.row({row.scalarization, num(row.weight), num(row.d2d_distance),
               num(row.epsilon), num(row.zeta), std::to_string(t),
               std::to_string(o.seed), num(o.tee), num(o.mee), num(o.jfi),
               num(o.objective), std::to_string(o.iterations),
               std::string(to_string(o.status))});
    }
  }
}

void do_solve(Context& ctx) {
  const RunConfig& c = ctx.config;
  std::optional<std::uint64_t> instance_seed;
  const NetworkInstance inst = [&] {
    if (c.instance) return *c.instance;
    instance_seed = trial_seed(c.seed, 0);
    return generate(*c.scenario, *instance_seed);
  }();
  SolverConfig solver = c.solver;
  if (!solver.initial) {
    solver.initial =
        PowerAllocation(default_initial_point(inst).watts() * c.initial_scale);
  }
  const SolveResult r = run(inst, c.scalarization, solver);

  {
    Csv csv(ctx.table("solve_trajectory.csv"),
            {"l", "objective", "u", "v", "subproblem_objective", "kkt_residual",
             "newton_iterations", "tee", "mee", "jfi"});
    for (std::size_t l = 0; l < r.trajectory.size(); ++l) {
      const MetricsReport m = evaluate(inst, r.iterates[l]);
      std::vector<std::string> cells = {std::to_string(l), num(r.trajectory[l])};
      if (l == 0) {
        cells.insert(cells.end(), {"", "", "", "", ""});
      } else {
        const IterationRecord& it = r.iterations[l - 1];
        cells.insert(cells.end(),
                     {num(it.u), num(it.v), num(it.subproblem_objective),
                      num(it.kkt_residual), std::to_string(it.newton_iterations)});
      }
      cells.insert(cells.end(),
                   {num(m.ee_total), num(m.ee_min), num(m.jain_index)});
      csv.row(cells);
    }
  }

  const FeasibilityReport feas = is_feasible(inst, r.allocation, 1e-6);
  json violations = json::array();
  for (const auto& v : feas.violations) violations.push_back(describe(v));
  json results = {{"status", std::string(to_string(r.status))},
                  {"message", r.message},
                  {"outer_iterations", r.outer_iterations},
                  {"objective", r.objective()},
                  {"trajectory", r.trajectory},
                  {"allocation", matrix_json(r.allocation.watts())},
                  {"metrics", metrics_json(r.metrics)},
                  {"feasible", feas.feasible},
                  {"violations", violations}};
  results["instance_seed"] =
      instance_seed ? json(*instance_seed) : json(nullptr);
  const bool failed = r.status == RunStatus::SubproblemFailure;
  ctx.record(results, failed);
  if (failed) ctx.outcome.exit_code = kExitSolverFailure;
}

void do_pareto(Context& ctx) {
  const RunConfig& c = ctx.config;
  if (c.scalarization.kind == ScalarizationKind::ProductEE) {
    throw ConfigError("config field 'scalarization.kind': pareto needs a weighted scalarization");
  }
  const SweepResult r = pareto_sweep(*c.scenario, c.resolved_w_grid(),
                                     c.scalarization.kind, c.include_product_ee,
                                     harness(c));
  const std::vector<std::string> header = {"w",        "mee_mean",  "mee_se",
                                           "tee_mean", "tee_se",    "jfi_mean",
                                           "iters_mean", "trials", "seed"};
  const auto cells = [](const SweepRow& row) {
    return std::vector<std::string>{
        num(row.weight),       num(row.mee.mean), num(row.mee.se),
        num(row.tee.mean),     num(row.tee.se),   num(row.jfi.mean),
        num(row.iterations.mean), std::to_string(row.trials),
        std::to_string(row.seed)};
  };
  {
    Csv csv(ctx.table("pareto.csv"), header);
    for (const SweepRow& row : r.rows) {
      if (row.scalarization != "product_ee") csv.row(cells(row));
    }
  }
  if (c.include_product_ee) {
    Csv csv(ctx.table("pareto_product_ee.csv"), header);
    for (const SweepRow& row : r.rows) {
      if (row.scalarization == "product_ee") csv.row(cells(row));
    }
  }
  write_trials(ctx, "pareto_trials.csv", r);
  ctx.outcome.exit_code = sweep_exit(r);
  ctx.record(sweep_json(r), ctx.outcome.exit_code != kExitOk);
}

void do_trend(Context& ctx) {
  const RunConfig& c = ctx.config;
  const SweepResult r =
      trend_study(*c.scenario, c.d2d_distances, c.trend_weights, harness(c));
  {
    Csv csv(ctx.table("trend.csv"),
            {"d2d_distance", "w", "tee_mean", "tee_se", "mee_mean", "mee_se",
             "jfi_mean", "jfi_se", "iters_mean", "trials", "seed"});
    for (const SweepRow& row : r.rows) {
      csv.row({num(row.d2d_distance), num(row.weight), num(row.tee.mean),
               num(row.tee.se), num(row.mee.mean), num(row.mee.se),
               num(row.jfi.mean), num(row.jfi.se), num(row.iterations.mean),
               std::to_string(row.trials), std::to_string(row.seed)});
    }
  }
  write_trials(ctx, "trend_trials.csv", r);
  ctx.outcome.exit_code = sweep_exit(r);
  ctx.record(sweep_json(r), ctx.outcome.exit_code != kExitOk);
}

void do_convergence(Context& ctx) {
  const RunConfig& c = ctx.config;
  const SweepResult r = convergence_study(*c.scenario, c.convergence_weights,
                                          c.zetas, c.epsilons, harness(c));
  {
    Csv csv(ctx.table("convergence.csv"),
            {"w", "zeta", "epsilon", "iters_mean", "iters_se", "objective_mean",
             "objective_se", "trials", "seed"});
    for (const SweepRow& row : r.rows) {
      csv.row({num(row.weight), num(row.zeta), num(row.epsilon),
               num(row.iterations.mean), num(row.iterations.se),
               num(row.objective.mean), num(row.objective.se),
               std::to_string(row.trials), std::to_string(row.seed)});
    }
  }
  for (const SweepRow& row : r.rows) {
    Csv csv(ctx.table("trajectory_w" + tag(row.weight) + "_zeta" +
                      tag(row.zeta) + "_eps" + tag(row.epsilon) + ".csv"),
            {"trial", "seed", "l", "objective"});
    for (std::size_t t = 0; t < row.outcomes.size(); ++t) {
      const TrialOutcome& o = row.outcomes[t];
      for (std::size_t l = 0; l < o.trajectory.size(); ++l) {
        csv.row({std::to_string(t), std::to_string(o.seed), std::to_string(l),
                 num(o.trajectory[l])});
      }
    }
  }
  ctx.outcome.exit_code = sweep_exit(r);
  ctx.record(sweep_json(r), ctx.outcome.exit_code != kExitOk);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

CommandOutcome execute(const RunConfig& config, const CommandOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cerr;
  RunConfig c = config;
  if (options.command) c.command = *options.command;
  if (options.output_directory) c.output_directory = *options.output_directory;
  if (c.command != Command::Solve && !c.scenario) {
    throw ConfigError("command '" + std::string(to_string(c.command)) +
                      "' needs a scenario");
  }
  std::error_code ec;
  fs::create_directories(c.output_directory, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + c.output_directory +
                      "': " + ec.message());
  }
  Context ctx{c, fs::path(c.output_directory), log, {}};
  if (verbose()) {
    log << to_string(c.command) << ": " << c.trials << " trials, seed " << c.seed
        << ", " << resolve_threads(c.threads) << " threads\n";
  }
  switch (c.command) {
    case Command::Solve:
      do_solve(ctx);
      break;
    case Command::Pareto:
      do_pareto(ctx);
      break;
    case Command::Trend:
      do_trend(ctx);
      break;
    case Command::Convergence:
      do_convergence(ctx);
      break;
  }
  return ctx.outcome;
}

CommandOutcome run_command(const std::string& config_path,
                           const std::vector<std::string>& overrides,
                           const CommandOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cerr;
  CommandOutcome out;
  try {
    const RunConfig c =
        parse_run_config(load_config_document(config_path, overrides));
    out = execute(c, options);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    out.exit_code = kExitConfig;
  } catch (const InfeasibleInitialPoint& e) {
    log << "infeasible: " << e.what() << '\n';
    out.exit_code = kExitInfeasible;
  } catch (const InfeasibleSubproblem& e) {
    log << "infeasible: " << e.what() << '\n';
    out.exit_code = kExitInfeasible;
  } catch (const DimensionError& e) {
    log << "error: " << e.what() << '\n';
    out.exit_code = kExitConfig;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
    out.exit_code = kExitConfig;
  } catch (const std::exception& e) {
    log << "solver failure: " << e.what() << '\n';
    out.exit_code = kExitSolverFailure;
  }
  return out;
}

CommandOutcome replay(const std::string& record_path,
                      const std::string& output_directory,
                      const CommandOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cerr;
  std::vector<std::string> tables;
  {
    std::ifstream in(record_path);
    const json doc = json::parse(in, nullptr, false);
    if (!in || doc.is_discarded() || !doc.is_object() || !doc.contains("tables")) {
      log << "error: '" << record_path << "' is not an emitted record\n";
      return {kExitConfig, {}, {}};
    }
    tables = doc.at("tables").get<std::vector<std::string>>();
  }
  CommandOptions opts = options;
  opts.command.reset();
  opts.output_directory = output_directory;
  CommandOutcome out = run_command(record_path, {}, opts);
  if (out.exit_code != kExitOk && out.exit_code != kExitSolverFailure) return out;
  const fs::path original = fs::path(record_path).parent_path();
  for (const std::string& name : tables) {
    const fs::path a = original / name;
    const fs::path b = fs::path(output_directory) / name;
    if (!fs::exists(a) || !fs::exists(b) || read_file(a) != read_file(b)) {
      log << "replay mismatch: " << name << '\n';
      out.exit_code = kExitMismatch;
    } else if (verbose()) {
      log << "identical: " << name << '\n';
    }
  }
  return out;
}

}  // namespace eeopt
