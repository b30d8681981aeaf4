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

#ifndef EEOPT_BARRIER_SOLVER_HPP_
#define EEOPT_BARRIER_SOLVER_HPP_

#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace eeopt {

/// maximize  objective()^T x   subject to  c_m(x) >= 0,  m = 1..M,
/// with every c_m concave and twice differentiable.
class ConcaveProgram {
 public:
  virtual ~ConcaveProgram() = default;

  virtual int dimension() const = 0;
  virtual int constraint_count() const = 0;
  virtual Eigen::VectorXd objective() const = 0;

  // values <- c(x); if jacobian is non-null, also the M x n Jacobian.
  virtual void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                           Eigen::MatrixXd* jacobian) const = 0;

  // hess += sum_m weights[m] * Hessian(c_m)(x).
  virtual void add_constraint_hessians(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& weights,
                                       Eigen::MatrixXd& hess) const = 0;
};

struct BarrierSettings {
  double initial_tau = 1.0;
  double tau_factor = 20.0;
  double newton_tolerance = 1e-9;  // on lambda^2 / 2 per centering step
  double armijo_slope = 0.01;
  double backtrack_shrink = 0.5;
  int max_newton_per_center = 100;
  int max_centering_steps = 60;
  double kkt_tolerance = 1e-8;
  double hessian_regularization = 1e-10;
  double min_step = 1e-14;
};

enum class SolveStatus { Optimal, MaxIterations, NumericalFailure };

std::string_view to_string(SolveStatus status);

struct BarrierResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // lambda_m = 1 / (tau c_m(x))
  double objective = 0.0;
  double kkt_residual = 0.0;
  double duality_gap = 0.0;  // M / tau at exit
  int newton_iterations = 0;
  int centering_steps = 0;
  bool stopped_early = false;  // objective crossed `stop_above`
  SolveStatus status = SolveStatus::Optimal;
};

// Log-barrier interior-point method with damped Newton centering.
// `start` must satisfy every constraint strictly (throws DomainError
// otherwise). If `stop_above` is set the method returns as soon as the
// objective exceeds it; phase I uses this.
BarrierResult solve_barrier(const ConcaveProgram& program,
                            const Eigen::VectorXd& start,
                            const BarrierSettings& settings,
                            std::optional<double> stop_above = std::nullopt);

// max( ||grad f + J^T lambda||_inf, max_m |lambda_m c_m|, max_m max(0, -c_m) )
double kkt_residual(const ConcaveProgram& program, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers);

/// Phase-I wrapper: variables (x, s), maximize s subject to c_m(x) - s >= 0.
class MinSlackProgram : public ConcaveProgram {
 public:
  explicit MinSlackProgram(const ConcaveProgram& base) : base_(base) {}

  int dimension() const override { return base_.dimension() + 1; }
  int constraint_count() const override { return base_.constraint_count(); }
  Eigen::VectorXd objective() const override;
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                   Eigen::MatrixXd* jacobian) const override;
  void add_constraint_hessians(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& weights,
                               Eigen::MatrixXd& hess) const override;

 private:
  const ConcaveProgram& base_;
};

}  // namespace eeopt

#endif  // EEOPT_BARRIER_SOLVER_HPP_
