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

#ifndef EEOPT_SCO_HPP_
#define EEOPT_SCO_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeopt/barrier_solver.hpp"
#include "eeopt/network.hpp"
#include "eeopt/scalarization.hpp"

namespace eeopt {

struct SolverConfig {
  double tolerance = 1e-3;  // relative change of the log objective
  int max_outer_iterations = 200;
  // Starting allocation; uniform P_max / K per block when empty.
  std::optional<PowerAllocation> initial;
  BarrierSettings barrier;
  double threshold_slack = 1e-3;  // log2 units, for the interior start

  void validate() const;
};

enum class RunStatus { Converged, IterationCap, SubproblemFailure };

std::string_view to_string(RunStatus status);

struct IterationRecord {
  double objective = 0.0;  // f_l after threshold tightening
  double u = 0.0;          // tightened log2 TEE threshold (NaN for PEE)
  double v = 0.0;          // tightened log2 MEE threshold
  double subproblem_objective = 0.0;
  double kkt_residual = 0.0;
  int newton_iterations = 0;
  SolveStatus subproblem_status = SolveStatus::Optimal;
};

struct SolveResult {
  PowerAllocation allocation;
  MetricsReport metrics;
  std::vector<double> trajectory;           // f_0 .. f_L
  std::vector<PowerAllocation> iterates;    // p_0 .. p_L
  std::vector<IterationRecord> iterations;  // one per outer iteration
  int outer_iterations = 0;
  RunStatus status = RunStatus::Converged;
  std::string message;

  double objective() const { return trajectory.back(); }
};

// p[i][k] = P_i^max / K.
PowerAllocation default_initial_point(const NetworkInstance& instance);

/// Sequential convex optimization of the scalarized EE objective.
///
/// Each iteration expands the rate minorant at the current allocation, solves
/// the convex subproblem to a KKT-certified optimum, tightens the EE
/// thresholds onto the minorant at the new q and records f_l. Stops when
/// |f_l - f_{l-1}| / max(|f_{l-1}|, 1e-12) < tolerance.
///
/// Throws InfeasibleInitialPoint if the start violates the power budgets or
/// rate floors, DomainError if it has a zero entry.
SolveResult run(const NetworkInstance& instance, const Scalarization& s,
                const SolverConfig& config);

struct ComplexityRow {
  double epsilon = 0.0;
  int iterations = 0;
  double bound = 0.0;  // 1 + (lambda - 1) / epsilon
  bool within_bound = true;
};

struct ComplexityProbe {
  std::vector<ComplexityRow> rows;  // in the order of the requested epsilons
  double initial_objective = 0.0;
  double best_objective = 0.0;
  double lambda = 1.0;
  bool bound_applicable = false;  // requires f_0 > 0
  bool monotone_in_epsilon = true;
};

ComplexityProbe complexity_probe(const NetworkInstance& instance,
                                 const Scalarization& s,
                                 const SolverConfig& config,
                                 const std::vector<double>& epsilons);

}  // namespace eeopt

#endif  // EEOPT_SCO_HPP_
