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

#include "eeopt/sco.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eeopt/errors.hpp"
#include "eeopt/subproblem.hpp"
#include "eeopt/surrogate.hpp"

namespace eeopt {
namespace {

double tightened_objective(const Scalarization& s, const ThresholdRoots& roots) {
  if (s.kind == ScalarizationKind::ProductEE) {
    return log_product_objective(roots.v_user);
  }
  return log_objective(s, roots.u, roots.v());
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (max_outer_iterations < 1) {
    throw DomainError("max_outer_iterations must be >= 1");
  }
  if (!(threshold_slack > 0.0)) {
    throw DomainError("threshold_slack must be positive");
  }
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::IterationCap:
      return "iteration_cap";
    case RunStatus::SubproblemFailure:
      return "subproblem_failure";
  }
  return "unknown";
}

PowerAllocation default_initial_point(const NetworkInstance& instance) {
  Eigen::MatrixXd p(instance.n_users(), instance.n_blocks());
  for (int i = 0; i < instance.n_users(); ++i) {
    p.row(i).setConstant(instance.max_power(i) / instance.n_blocks());
  }
  return PowerAllocation(std::move(p));
}

SolveResult run(const NetworkInstance& instance, const Scalarization& s,
                const SolverConfig& config) {
  config.validate();
  s.validate();
  PowerAllocation p =
      config.initial ? *config.initial : default_initial_point(instance);

  const FeasibilityReport feas = is_feasible(instance, p, 1e-9);
  if (!feas) {
    std::ostringstream os;
    os << "initial allocation is infeasible:";
    for (const auto& v : feas.violations) os << " " << describe(v) << ";";
    throw InfeasibleInitialPoint(os.str());
  }
  if (!(p.watts().array() > 0.0).all()) {
    throw DomainError("initial allocation must be strictly positive");
  }

  SolveResult out;
  MetricsReport report = evaluate(instance, p);
  out.trajectory.push_back(log_objective(s, report));
  out.iterates.push_back(p);
  out.status = RunStatus::IterationCap;

  // Keeps every q finite; 2^-100 P_max is far below any noise floor.
  const Eigen::VectorXd q_floor =
      instance.parameters().max_power.unaryExpr(
          [](double pm) { return std::log2(pm) - 100.0; });

  for (int l = 1; l <= config.max_outer_iterations; ++l) {
    const SurrogateModel model = SurrogateModel::build(instance, p);
    const ConvexSubproblem sub(model, s);
    const Eigen::MatrixXd q_prev = model.expansion_point();

    IterationRecord rec;
    SubproblemSolution sol;
    try {
      const Eigen::VectorXd start = strictly_feasible_start(
          sub, sub.make_hint(q_prev, report), config.barrier,
          config.threshold_slack);
      sol = solve(sub, start, config.barrier);
    } catch (const InfeasibleSubproblem& e) {
      out.status = RunStatus::SubproblemFailure;
      out.message = e.what();
      break;
    }
    rec.subproblem_objective = sol.objective;
    rec.kkt_residual = sol.kkt_residual;
    rec.newton_iterations = sol.newton_iterations;
    rec.subproblem_status = sol.status;
    if (sol.status == SolveStatus::NumericalFailure) {
      out.status = RunStatus::SubproblemFailure;
      out.message = "subproblem solver reported a numerical failure";
      break;
    }

    Eigen::MatrixXd q = sol.q;
    for (int i = 0; i < q.rows(); ++i) {
      q.row(i) = q.row(i).cwiseMax(q_floor(i));
    }
    const ThresholdRoots roots = threshold_roots(model, q);
    rec.u = roots.u;
    rec.v = roots.v();
    rec.objective = tightened_objective(s, roots);

    p = to_power(q);
    report = evaluate(instance, p);
    const double prev = out.trajectory.back();
    out.trajectory.push_back(rec.objective);
    out.iterates.push_back(p);
    out.iterations.push_back(rec);
    out.outer_iterations = l;

    const double change =
        std::abs(rec.objective - prev) / std::max(std::abs(prev), 1e-12);
    if (change < config.tolerance) {
      out.status = RunStatus::Converged;
      break;
    }
  }

  out.allocation = p;
  out.metrics = report;
  return out;
}

ComplexityProbe complexity_probe(const NetworkInstance& instance,
                                 const Scalarization& s,
                                 const SolverConfig& config,
                                 const std::vector<double>& epsilons) {
  ComplexityProbe probe;
  std::vector<SolveResult> runs;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw DomainError("every epsilon must be positive");
    SolverConfig c = config;
    c.tolerance = eps;
    runs.push_back(run(instance, s, c));
  }
  if (runs.empty()) return probe;
  probe.initial_objective = runs.front().trajectory.front();
  probe.best_objective = probe.initial_objective;
  for (const SolveResult& r : runs) {
    for (double f : r.trajectory) {
      probe.best_objective = std::max(probe.best_objective, f);
    }
  }
  probe.bound_applicable = probe.initial_objective > 0.0;
  if (probe.bound_applicable) {
    probe.lambda = probe.best_objective / probe.initial_objective;
  }
  for (std::size_t e = 0; e < runs.size(); ++e) {
    ComplexityRow row;
    row.epsilon = epsilons[e];
    row.iterations = runs[e].outer_iterations;
    if (probe.bound_applicable) {
      row.bound = 1.0 + (probe.lambda - 1.0) / row.epsilon;
      row.within_bound = row.iterations <= row.bound + 1e-12;
    }
    probe.rows.push_back(row);
  }
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = 0; b < runs.size(); ++b) {
      if (epsilons[a] < epsilons[b] &&
          probe.rows[a].iterations < probe.rows[b].iterations) {
        probe.monotone_in_epsilon = false;
      }
    }
  }
  return probe;
}

}  // namespace eeopt
