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

#include "eeopt/barrier_solver.hpp"

#include <cmath>
#include <vector>

#include "eeopt/errors.hpp"

namespace eeopt {
namespace {

bool strictly_positive(const Eigen::VectorXd& c) {
  return c.allFinite() && (c.array() > 0.0).all();
}

// Solves H d = rhs for symmetric PSD H, regularizing when H is singular.
Eigen::VectorXd newton_direction(Eigen::MatrixXd& hess,
                                 const Eigen::VectorXd& rhs,
                                 double regularization) {
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd d = llt.solve(rhs);
    if (d.allFinite()) return d;
  }
  const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
  double reg = regularization * scale;
  for (int attempt = 0; attempt < 12; ++attempt, reg *= 100.0) {
    Eigen::MatrixXd shifted = hess;
    shifted.diagonal().array() += reg;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd d = llt.solve(rhs);
      if (d.allFinite()) return d;
    }
  }
  return Eigen::VectorXd::Constant(rhs.size(), std::nan(""));
}

// Multipliers solving J_A^T lambda_A = -cost in least squares over the
// constraints that are active at the barrier center (c_m < lambda_m, i.e.
// c_m^2 < 1 / tau). Empty when the fit yields a negative multiplier.
Eigen::VectorXd active_set_multipliers(const ConcaveProgram& program,
                                       const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& barrier) {
  const int m = program.constraint_count();
  Eigen::VectorXd c(m);
  Eigen::MatrixXd jac(m, program.dimension());
  program.constraints(x, c, &jac);
  std::vector<int> active;
  for (int k = 0; k < m; ++k) {
    if (c(k) < barrier(k)) active.push_back(k);
  }
  if (active.empty()) return {};
  Eigen::MatrixXd ja(program.dimension(), static_cast<int>(active.size()));
  for (std::size_t a = 0; a < active.size(); ++a) {
    ja.col(static_cast<int>(a)) = jac.row(active[a]).transpose();
  }
  const Eigen::VectorXd fit =
      ja.completeOrthogonalDecomposition().solve(-program.objective());
  if (!fit.allFinite() || (fit.array() < 0.0).any()) return {};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (std::size_t a = 0; a < active.size(); ++a) {
    out(active[a]) = fit(static_cast<int>(a));
  }
  return out;
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

BarrierResult solve_barrier(const ConcaveProgram& program,
                            const Eigen::VectorXd& start,
                            const BarrierSettings& settings,
                            std::optional<double> stop_above) {
  const int n = program.dimension();
  const int m = program.constraint_count();
  if (start.size() != n) throw DimensionError("barrier start has wrong size");
  const Eigen::VectorXd cost = program.objective();

  Eigen::VectorXd x = start;
  Eigen::VectorXd c(m), c_trial(m);
  Eigen::MatrixXd jac(m, n), hess(n, n);
  program.constraints(x, c, nullptr);
  if (!strictly_positive(c)) {
    throw DomainError("barrier start is not strictly feasible");
  }

  BarrierResult out;
  double tau = settings.initial_tau;

  auto finish = [&](SolveStatus status) {
    program.constraints(x, c, nullptr);
    out.x = x;
    out.objective = cost.dot(x);
    out.multipliers = (tau * c).cwiseInverse();
    out.duality_gap = m / tau;
    out.kkt_residual = kkt_residual(program, x, out.multipliers);
    // lambda = 1 / (tau c) inherits the relative rounding error of c, which
    // is large for active constraints evaluated as differences of O(1)
    // terms; a least-squares refit on the active set removes it.
    const Eigen::VectorXd refit =
        active_set_multipliers(program, x, out.multipliers);
    if (refit.size() == m) {
      const double r = kkt_residual(program, x, refit);
      if (r < out.kkt_residual) {
        out.kkt_residual = r;
        out.multipliers = refit;
      }
    }
    out.status = status;
    return out;
  };

  // Runs damped Newton on tau * (-cost^T x) - sum log c(x) until the Newton
  // decrement falls below `tol`. Returns false on a line-search breakdown.
  auto center = [&](double tol, int cap, bool& converged) {
    converged = false;
    for (int it = 0; it < cap; ++it) {
      program.constraints(x, c, &jac);
      const Eigen::VectorXd inv = c.cwiseInverse();
      const Eigen::VectorXd grad = -tau * cost - jac.transpose() * inv;
      hess.noalias() = jac.transpose() * inv.cwiseAbs2().asDiagonal() * jac;
      program.add_constraint_hessians(x, -inv, hess);
      const Eigen::VectorXd dir =
          newton_direction(hess, -grad, settings.hessian_regularization);
      if (!dir.allFinite()) return false;
      const double slope = grad.dot(dir);
      const double decrement = -slope;
      if (decrement / 2.0 <= tol) {
        converged = true;
        return true;
      }
      double step = 1.0;
      bool accepted = false;
      while (step >= settings.min_step) {
        const Eigen::VectorXd trial = x + step * dir;
        program.constraints(trial, c_trial, nullptr);
        if (strictly_positive(c_trial)) {
          // Barrier change computed from ratios to avoid cancellation at
          // large tau.
          double change = -tau * step * cost.dot(dir);
          for (int k = 0; k < m; ++k) change -= std::log(c_trial(k) / c(k));
          if (change <= settings.armijo_slope * step * slope) {
            x = trial;
            accepted = true;
            break;
          }
        }
        step *= settings.backtrack_shrink;
      }
      if (!accepted) {
        // Roundoff floor: the decrement is already negligible.
        if (decrement < 1e-6) {
          converged = true;
          return true;
        }
        return false;
      }
      ++out.newton_iterations;
      if (stop_above && cost.dot(x) > *stop_above) {
        out.stopped_early = true;
        return true;
      }
    }
    return true;
  };

  // Past m / tau <= tol the certificate decides; degenerate active sets can
  // need a few more tau increases before stationarity is within tolerance.
  std::optional<BarrierResult> best;
  for (int outer = 0; outer < settings.max_centering_steps; ++outer) {
    if (outer > 0) tau *= settings.tau_factor;
    bool converged = false;  // a capped center is tolerated; the KKT
                             // certificate at exit decides the status
    if (!center(settings.newton_tolerance, settings.max_newton_per_center,
                converged)) {
      // A stalled line search near the optimum can still carry a valid
      // certificate.
      BarrierResult r = finish(SolveStatus::NumericalFailure);
      if (r.kkt_residual <= settings.kkt_tolerance) {
        r.status = SolveStatus::Optimal;
        return r;
      }
      if (best) return *best;
      return r;
    }
    ++out.centering_steps;
    if (out.stopped_early) return finish(SolveStatus::Optimal);
    if (m / tau <= settings.kkt_tolerance) {
      BarrierResult r = finish(SolveStatus::Optimal);
      if (r.kkt_residual <= settings.kkt_tolerance) return r;
      r.status = SolveStatus::MaxIterations;
      if (!best || r.kkt_residual < best->kkt_residual) best = r;
    }
  }
  if (best) return *best;
  return finish(SolveStatus::MaxIterations);
}

double kkt_residual(const ConcaveProgram& program, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& multipliers) {
  const int m = program.constraint_count();
  if (multipliers.size() != m) {
    throw DimensionError("one multiplier per constraint expected");
  }
  Eigen::VectorXd c(m);
  Eigen::MatrixXd jac(m, program.dimension());
  program.constraints(x, c, &jac);
  const Eigen::VectorXd stationarity =
      program.objective() + jac.transpose() * multipliers;
  double r = stationarity.cwiseAbs().maxCoeff();
  for (int k = 0; k < m; ++k) {
    r = std::max(r, std::abs(multipliers(k) * c(k)));
    r = std::max(r, -c(k));
  }
  return r;
}

Eigen::VectorXd MinSlackProgram::objective() const {
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(dimension());
  obj(dimension() - 1) = 1.0;
  return obj;
}

void MinSlackProgram::constraints(const Eigen::VectorXd& x,
                                  Eigen::VectorXd& values,
                                  Eigen::MatrixXd* jacobian) const {
  const int n = base_.dimension();
  const Eigen::VectorXd inner = x.head(n);
  const double s = x(n);
  if (jacobian) {
    Eigen::MatrixXd base_jac(base_.constraint_count(), n);
    base_.constraints(inner, values, &base_jac);
    jacobian->resize(base_.constraint_count(), n + 1);
    jacobian->leftCols(n) = base_jac;
    jacobian->col(n).setConstant(-1.0);
  } else {
    base_.constraints(inner, values, nullptr);
  }
  values.array() -= s;
}

void MinSlackProgram::add_constraint_hessians(const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& weights,
                                              Eigen::MatrixXd& hess) const {
  const int n = base_.dimension();
  Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(n, n);
  base_.add_constraint_hessians(x.head(n), weights, inner);
  hess.topLeftCorner(n, n) += inner;
}

}  // namespace eeopt
