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

#include "eeopt/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "eeopt/errors.hpp"

namespace eeopt {
namespace {

TrialOutcome run_trial(const NetworkInstance& instance, const Scalarization& s,
                       const SolverConfig& solver, std::uint64_t seed,
                       bool keep_trajectory) {
  const SolveResult r = run(instance, s, solver);
  TrialOutcome t;
  t.seed = seed;
  t.tee = r.metrics.ee_total;
  t.mee = r.metrics.ee_min;
  t.jfi = r.metrics.jain_index;
  t.objective = r.objective();
  t.iterations = r.outer_iterations;
  t.status = r.status;
  if (keep_trajectory) t.trajectory = r.trajectory;
  return t;
}

void finalize(SweepRow& row) {
  std::vector<double> tee, mee, jfi, obj, it;
  for (const TrialOutcome& t : row.outcomes) {
    tee.push_back(t.tee);
    mee.push_back(t.mee);
    jfi.push_back(t.jfi);
    obj.push_back(t.objective);
    it.push_back(t.iterations);
    if (t.status == RunStatus::SubproblemFailure) ++row.failures;
  }
  row.tee = summarize(tee);
  row.mee = summarize(mee);
  row.jfi = summarize(jfi);
  row.objective = summarize(obj);
  row.iterations = summarize(it);
  row.trials = static_cast<int>(row.outcomes.size());
}

struct Job {
  std::size_t row;
  int trial;
  Scalarization scalarization;
  double d2d_distance;
  SolverConfig solver;
  bool keep_trajectory;
};

// Runs every job; each regenerates its trial's instance from the trial seed.
void execute(const ScenarioConfig& config, const std::vector<Job>& jobs,
             SweepResult& result, const HarnessOptions& options) {
  std::vector<TrialOutcome> outcomes(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), options.threads, [&](int j) {
    const Job& job = jobs[j];
    ScenarioConfig c = config;
    c.d2d_distance = job.d2d_distance;
    const std::uint64_t seed = result.trial_seeds[job.trial];
    const NetworkInstance inst = generate(c, seed);
    // Generated instances always start from the uniform allocation.
    SolverConfig solver = job.solver;
    solver.initial.reset();
    outcomes[j] =
        run_trial(inst, job.scalarization, solver, seed, job.keep_trajectory);
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    result.rows[jobs[j].row].outcomes.push_back(std::move(outcomes[j]));
  }
  for (SweepRow& row : result.rows) finalize(row);
}

SweepResult make_result(const HarnessOptions& options) {
  if (options.trials < 1) throw DomainError("trials must be >= 1");
  SweepResult r;
  for (int t = 0; t < options.trials; ++t) {
    r.trial_seeds.push_back(trial_seed(options.master_seed, t));
  }
  return r;
}

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / (s.count - 1)) / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EEOPT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int threads,
                  const std::function<void(int)>& task) {
  const int workers = std::min(resolve_threads(threads), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<double> weight_grid(int n) {
  if (n < 2) throw DomainError("a weight grid needs at least 2 points");
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = static_cast<double>(i) / (n - 1);
  return w;
}

SweepResult pareto_sweep(const ScenarioConfig& config,
                         const std::vector<double>& w_grid,
                         ScalarizationKind kind, bool include_product_ee,
                         const HarnessOptions& options) {
  SweepResult result = make_result(options);
  std::vector<Job> jobs;
  auto add_row = [&](const Scalarization& s) {
    SweepRow row;
    row.scalarization = std::string(to_string(s.kind));
    row.weight = s.weight;
    row.d2d_distance = config.d2d_distance;
    row.epsilon = options.solver.tolerance;
    row.seed = options.master_seed;
    result.rows.push_back(row);
    for (int t = 0; t < options.trials; ++t) {
      jobs.push_back({result.rows.size() - 1, t, s, config.d2d_distance,
                      options.solver, false});
    }
  };
  for (double w : w_grid) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weights must lie in [0, 1]");
    Scalarization s{kind, w};
    if (kind == ScalarizationKind::WeightedMinimum && (w == 0.0 || w == 1.0)) {
      s.kind = ScalarizationKind::WeightedProduct;
    }
    if (kind == ScalarizationKind::ProductEE) {
      throw DomainError("pareto sweep needs a weighted scalarization");
    }
    add_row(s);
  }
  if (include_product_ee) add_row(Scalarization::product_ee());
  execute(config, jobs, result, options);
  return result;
}

SweepResult trend_study(const ScenarioConfig& config,
                        const std::vector<double>& d2d_distances,
                        const std::vector<double>& weights,
                        const HarnessOptions& options) {
  SweepResult result = make_result(options);
  std::vector<Job> jobs;
  for (double d : d2d_distances) {
    if (!(d > 0.0)) throw DomainError("D2D distances must be positive");
    for (double w : weights) {
      const Scalarization s = Scalarization::weighted_product(w);
      SweepRow row;
      row.scalarization = std::string(to_string(s.kind));
      row.weight = w;
      row.d2d_distance = d;
      row.epsilon = options.solver.tolerance;
      row.seed = options.master_seed;
      result.rows.push_back(row);
      for (int t = 0; t < options.trials; ++t) {
        jobs.push_back({result.rows.size() - 1, t, s, d, options.solver, false});
      }
    }
  }
  execute(config, jobs, result, options);
  return result;
}

SweepResult convergence_study(const ScenarioConfig& config,
                              const std::vector<double>& weights,
                              const std::vector<double>& zetas,
                              const std::vector<double>& epsilons,
                              const HarnessOptions& options) {
  SweepResult result = make_result(options);
  for (double z : zetas) {
    if (!(z > 0.0 && z <= 1.0)) throw DomainError("zeta must lie in (0, 1]");
  }
  // Starting points depend on the instance, so jobs are dispatched here
  // rather than through execute().
  struct ConvJob {
    std::size_t row;
    int trial;
    Scalarization s;
    double zeta;
    double eps;
  };
  std::vector<ConvJob> jobs;
  for (double w : weights) {
    for (double z : zetas) {
      for (double e : epsilons) {
        if (!(e > 0.0)) throw DomainError("epsilon must be positive");
        SweepRow row;
        row.scalarization = "weighted_product";
        row.weight = w;
        row.d2d_distance = config.d2d_distance;
        row.epsilon = e;
        row.zeta = z;
        row.seed = options.master_seed;
        result.rows.push_back(row);
        for (int t = 0; t < options.trials; ++t) {
          jobs.push_back({result.rows.size() - 1, t,
                          Scalarization::weighted_product(w), z, e});
        }
      }
    }
  }
  std::vector<TrialOutcome> outcomes(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), options.threads, [&](int j) {
    const ConvJob& job = jobs[j];
    const std::uint64_t seed = result.trial_seeds[job.trial];
    const NetworkInstance inst = generate(config, seed);
    SolverConfig solver = options.solver;
    solver.tolerance = job.eps;
    solver.initial = PowerAllocation(
        default_initial_point(inst).watts() * job.zeta);
    outcomes[j] = run_trial(inst, job.s, solver, seed, true);
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    result.rows[jobs[j].row].outcomes.push_back(std::move(outcomes[j]));
  }
  for (SweepRow& row : result.rows) finalize(row);
  return result;
}

}  // namespace eeopt
