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

#ifndef EEOPT_SUBPROBLEM_HPP_
#define EEOPT_SUBPROBLEM_HPP_

#include <Eigen/Dense>

#include "eeopt/barrier_solver.hpp"
#include "eeopt/scalarization.hpp"
#include "eeopt/surrogate.hpp"

namespace eeopt {

/// Position of each variable of the convex subproblem in the flat vector x.
/// q occupies the first N*K slots (row-major: (i, k) -> i * K + k), followed
/// by u and v when the scalarization uses shared thresholds, then the
/// auxiliaries (t, or v_1..v_N for product EE).
class VariableLayout {
 public:
  VariableLayout(int n_users, int n_blocks, const ObjectiveSpec& spec);

  int size() const { return size_; }
  int n_users() const { return n_users_; }
  int n_blocks() const { return n_blocks_; }
  int q(int user, int block) const { return user * n_blocks_ + block; }
  int q_count() const { return n_users_ * n_blocks_; }
  int u() const { return u_; }  // -1 when absent
  int v() const { return v_; }  // -1 when absent
  int t() const { return t_; }  // -1 when absent
  // Index of the EE threshold bounding user i (shared v or per-user v_i).
  int threshold_of(int user) const;

  Eigen::MatrixXd q_matrix(const Eigen::VectorXd& x) const;
  void set_q(Eigen::VectorXd& x, const Eigen::MatrixXd& q) const;

 private:
  int n_users_, n_blocks_;
  int u_ = -1, v_ = -1, t_ = -1, per_user_ = -1;
  int size_ = 0;
};

/// The convex problem solved at every SCO step: maximize the linear
/// scalarization objective over the concave minorant constraints.
///
/// Constraint order: N power budgets, N rate floors, N EE thresholds, the
/// total-EE threshold (if present), then the epigraph cuts. Rate-type
/// constraints are divided by B_RB * K (and the total by N B_RB K), power
/// budgets by P_max, so the KKT residual is in comparable units.
class ConvexSubproblem : public ConcaveProgram {
 public:
  ConvexSubproblem(const SurrogateModel& model, const Scalarization& s);

  const SurrogateModel& model() const { return model_; }
  const Scalarization& scalarization() const { return scalarization_; }
  const ObjectiveSpec& spec() const { return spec_; }
  const VariableLayout& layout() const { return layout_; }

  int power_constraint(int user) const { return user; }
  int rate_constraint(int user) const { return n_ + user; }
  int psi_constraint(int user) const { return 2 * n_ + user; }
  int total_constraint() const;  // -1 when absent
  int cut_constraint(int c) const;

  double rate_scale() const { return rate_scale_; }

  int dimension() const override { return layout_.size(); }
  int constraint_count() const override { return m_; }
  Eigen::VectorXd objective() const override;
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                   Eigen::MatrixXd* jacobian) const override;
  void add_constraint_hessians(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& weights,
                               Eigen::MatrixXd& hess) const override;

  // Packs an SCO iterate into a hint: q plus thresholds at the realized EEs
  // (u = log2 TEE, v = log2 MEE, v_i = log2 EE_i, t from the cuts).
  Eigen::VectorXd make_hint(const Eigen::MatrixXd& q,
                            const MetricsReport& report) const;

 private:
  const SurrogateModel& model_;
  Scalarization scalarization_;
  ObjectiveSpec spec_;
  VariableLayout layout_;
  int n_, m_;
  double rate_scale_;
};

// Largest thresholds compatible with q under the minorant: the roots of
// g~(q, u) = 0 and psi~_i(q, v_i) = 0 (closed form). -inf when the rate
// bound is not positive.
struct ThresholdRoots {
  double u = 0.0;
  Eigen::VectorXd v_user;
  double v() const { return v_user.minCoeff(); }
};
ThresholdRoots threshold_roots(const SurrogateModel& model,
                               const Eigen::MatrixXd& q);

// Sets thresholds / auxiliaries in x to (root - delta) for the q held in x.
void place_thresholds(const ConvexSubproblem& sub, Eigen::VectorXd& x,
                      double delta);

/// Strictly interior point of the subproblem near `hint`.
/// Shrinks users whose power budget is tight, backs thresholds off their
/// roots by `delta` (log2 units), and falls back to a phase-I solve when the
/// rate floors cannot be met strictly. Throws InfeasibleSubproblem when the
/// phase-I optimum is not positive.
Eigen::VectorXd strictly_feasible_start(const ConvexSubproblem& sub,
                                        const Eigen::VectorXd& hint,
                                        const BarrierSettings& settings,
                                        double delta = 1e-3);

struct SubproblemSolution {
  Eigen::VectorXd x;
  Eigen::MatrixXd q;
  double u = 0.0;  // NaN when absent
  double v = 0.0;  // NaN when absent
  Eigen::VectorXd auxiliary;
  Eigen::VectorXd multipliers;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int newton_iterations = 0;
  SolveStatus status = SolveStatus::Optimal;
};

SubproblemSolution solve(const ConvexSubproblem& sub,
                         const Eigen::VectorXd& start,
                         const BarrierSettings& settings);

}  // namespace eeopt

#endif  // EEOPT_SUBPROBLEM_HPP_
