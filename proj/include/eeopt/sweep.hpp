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

#ifndef EEOPT_SWEEP_HPP_
#define EEOPT_SWEEP_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eeopt/scalarization.hpp"
#include "eeopt/scenario.hpp"
#include "eeopt/sco.hpp"

namespace eeopt {

struct Summary {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  int count = 0;
};

Summary summarize(const std::vector<double>& values);

// Outcome of one SCO run inside a sweep.
struct TrialOutcome {
  std::uint64_t seed = 0;
  double tee = 0.0;
  double mee = 0.0;
  double jfi = 0.0;
  double objective = 0.0;  // final f_L
  int iterations = 0;
  RunStatus status = RunStatus::Converged;
  std::vector<double> trajectory;  // kept only by the convergence study
};

struct SweepRow {
  std::string scalarization;  // kind actually run at this point
  double weight = 0.0;
  double d2d_distance = 0.0;
  double epsilon = 0.0;
  double zeta = 1.0;
  Summary tee, mee, jfi, objective, iterations;
  int trials = 0;
  int failures = 0;
  std::uint64_t seed = 0;  // master seed
  std::vector<TrialOutcome> outcomes;  // in trial order
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::uint64_t> trial_seeds;
};

struct HarnessOptions {
  int trials = 1000;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: EEOPT_THREADS, else hardware concurrency
  SolverConfig solver;
};

// Worker count: explicit request, else $EEOPT_THREADS, else the hardware.
int resolve_threads(int requested);

// Runs task(0..count-1) on a worker pool; rethrows the first exception.
void parallel_for(int count, int threads, const std::function<void(int)>& task);

/// One row per weight: averaged (MEE, TEE) of the scalarization at w. For the
/// weighted minimum, w = 0 and w = 1 are served by the weighted product.
/// With `include_product_ee` a final row holds the product-EE baseline.
SweepResult pareto_sweep(const ScenarioConfig& config,
                         const std::vector<double>& w_grid,
                         ScalarizationKind kind, bool include_product_ee,
                         const HarnessOptions& options);

// One row per (distance, weight), distances outermost.
SweepResult trend_study(const ScenarioConfig& config,
                        const std::vector<double>& d2d_distances,
                        const std::vector<double>& weights,
                        const HarnessOptions& options);

// Weighted-product runs from p = zeta * P_max / K; one row per
// (weight, zeta, epsilon) with trajectories retained in the outcomes.
SweepResult convergence_study(const ScenarioConfig& config,
                              const std::vector<double>& weights,
                              const std::vector<double>& zetas,
                              const std::vector<double>& epsilons,
                              const HarnessOptions& options);

// n equally spaced weights on [0, 1] (n >= 2).
std::vector<double> weight_grid(int n);

}  // namespace eeopt

#endif  // EEOPT_SWEEP_HPP_
