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

#include "eeopt/subproblem.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "eeopt/errors.hpp"

namespace eeopt {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn2Sq = kLn2 * kLn2;

// Power budgets and rate floors only; the variables are q alone. Used by
// phase I, since the EE thresholds can always be made strict by lowering
// them once every rate bound is positive.
class RateFeasibilityProgram : public ConcaveProgram {
 public:
  explicit RateFeasibilityProgram(const ConvexSubproblem& sub) : sub_(sub) {}

  int dimension() const override { return sub_.layout().q_count(); }
  int constraint_count() const override { return 2 * sub_.layout().n_users(); }
  Eigen::VectorXd objective() const override {
    return Eigen::VectorXd::Zero(dimension());
  }

  void constraints(const Eigen::VectorXd& xq, Eigen::VectorXd& values,
                   Eigen::MatrixXd* jacobian) const override {
    const int n = sub_.layout().n_users();
    Eigen::VectorXd full = embed(xq);
    Eigen::VectorXd all(sub_.constraint_count());
    Eigen::MatrixXd full_jac;
    sub_.constraints(full, all, jacobian ? &full_jac : nullptr);
    values = all.head(2 * n);
    if (jacobian) *jacobian = full_jac.topLeftCorner(2 * n, dimension());
  }

  void add_constraint_hessians(const Eigen::VectorXd& xq,
                               const Eigen::VectorXd& weights,
                               Eigen::MatrixXd& hess) const override {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(sub_.constraint_count());
    w.head(weights.size()) = weights;
    Eigen::MatrixXd full =
        Eigen::MatrixXd::Zero(sub_.dimension(), sub_.dimension());
    sub_.add_constraint_hessians(embed(xq), w, full);
    hess += full.topLeftCorner(dimension(), dimension());
  }

 private:
  Eigen::VectorXd embed(const Eigen::VectorXd& xq) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(sub_.dimension());
    full.head(xq.size()) = xq;
    return full;
  }

  const ConvexSubproblem& sub_;
};

}  // namespace

VariableLayout::VariableLayout(int n_users, int n_blocks,
                               const ObjectiveSpec& spec)
    : n_users_(n_users), n_blocks_(n_blocks) {
  int next = n_users * n_blocks;
  if (spec.shared_thresholds) {
    u_ = next++;
    v_ = next++;
  }
  if (spec.kind == ScalarizationKind::WeightedMinimum) t_ = next++;
  if (spec.kind == ScalarizationKind::ProductEE) {
    per_user_ = next;
    next += n_users;
  }
  size_ = next;
}

int VariableLayout::threshold_of(int user) const {
  return per_user_ >= 0 ? per_user_ + user : v_;
}

Eigen::MatrixXd VariableLayout::q_matrix(const Eigen::VectorXd& x) const {
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(x.data(), n_users_, n_blocks_);
}

void VariableLayout::set_q(Eigen::VectorXd& x, const Eigen::MatrixXd& q) const {
  for (int i = 0; i < n_users_; ++i) {
    for (int k = 0; k < n_blocks_; ++k) x(this->q(i, k)) = q(i, k);
  }
}

ConvexSubproblem::ConvexSubproblem(const SurrogateModel& model,
                                   const Scalarization& s)
    : model_(model),
      scalarization_(s),
      spec_(subproblem_objective_spec(s, model.instance().n_users())),
      layout_(model.instance().n_users(), model.instance().n_blocks(), spec_),
      n_(model.instance().n_users()) {
  m_ = 2 * n_ + spec_.psi_constraints + (spec_.has_total_constraint ? 1 : 0) +
       static_cast<int>(spec_.cuts.size());
  rate_scale_ =
      model.instance().bandwidth_per_block() * model.instance().n_blocks();
}

int ConvexSubproblem::total_constraint() const {
  return spec_.has_total_constraint ? 3 * n_ : -1;
}

int ConvexSubproblem::cut_constraint(int c) const {
  return 3 * n_ + (spec_.has_total_constraint ? 1 : 0) + c;
}

Eigen::VectorXd ConvexSubproblem::objective() const {
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(layout_.size());
  switch (spec_.kind) {
    case ScalarizationKind::WeightedProduct:
      obj(layout_.u()) = spec_.weight_u;
      obj(layout_.v()) = spec_.weight_v;
      break;
    case ScalarizationKind::WeightedMinimum:
      obj(layout_.t()) = 1.0;
      break;
    case ScalarizationKind::ProductEE:
      for (int i = 0; i < n_; ++i) obj(layout_.threshold_of(i)) = 1.0;
      break;
  }
  return obj;
}

void ConvexSubproblem::constraints(const Eigen::VectorXd& x,
                                   Eigen::VectorXd& values,
                                   Eigen::MatrixXd* jacobian) const {
  const NetworkInstance& inst = model_.instance();
  const int nk = inst.n_blocks();
  const Eigen::MatrixXd q = layout_.q_matrix(x);
  const Eigen::MatrixXd p = q.unaryExpr([](double e) { return std::exp2(e); });
  values.resize(m_);
  if (jacobian) jacobian->setZero(m_, layout_.size());

  std::vector<SurrogateValue> rates;
  rates.reserve(n_);
  for (int i = 0; i < n_; ++i) rates.push_back(model_.rate(q, i));

  auto put_q_grad = [&](int row, const Eigen::MatrixXd& dq, double scale) {
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < nk; ++k) {
        (*jacobian)(row, layout_.q(i, k)) = dq(i, k) * scale;
      }
    }
  };

  for (int i = 0; i < n_; ++i) {
    const double pmax = inst.max_power(i);
    values(power_constraint(i)) = 1.0 - p.row(i).sum() / pmax;
    if (jacobian) {
      for (int k = 0; k < nk; ++k) {
        (*jacobian)(power_constraint(i), layout_.q(i, k)) =
            -kLn2 * p(i, k) / pmax;
      }
    }
    values(rate_constraint(i)) =
        (rates[i].value - inst.min_rate(i)) / rate_scale_;
    if (jacobian) put_q_grad(rate_constraint(i), rates[i].dq, 1.0 / rate_scale_);
  }

  for (int i = 0; i < n_; ++i) {
    const int vi = layout_.threshold_of(i);
    const double th = std::exp2(x(vi));
    const double mu = inst.amp_inefficiency(i);
    const double cost = th * (mu * p.row(i).sum() + inst.static_power(i));
    values(psi_constraint(i)) = (rates[i].value - cost) / rate_scale_;
    if (jacobian) {
      const int row = psi_constraint(i);
      put_q_grad(row, rates[i].dq, 1.0 / rate_scale_);
      for (int k = 0; k < nk; ++k) {
        (*jacobian)(row, layout_.q(i, k)) -= kLn2 * mu * p(i, k) * th / rate_scale_;
      }
      (*jacobian)(row, vi) = -kLn2 * cost / rate_scale_;
    }
  }

  if (spec_.has_total_constraint) {
    const int row = total_constraint();
    const double scale = 1.0 / (n_ * rate_scale_);
    const double th = std::exp2(x(layout_.u()));
    double rate_sum = 0.0;
    double consumed = 0.0;
    for (int i = 0; i < n_; ++i) {
      rate_sum += rates[i].value;
      consumed += inst.amp_inefficiency(i) * p.row(i).sum() + inst.static_power(i);
    }
    values(row) = (rate_sum - th * consumed) * scale;
    if (jacobian) {
      Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n_, nk);
      for (int i = 0; i < n_; ++i) {
        dq += rates[i].dq;
        dq.row(i) -= kLn2 * th * inst.amp_inefficiency(i) * p.row(i);
      }
      put_q_grad(row, dq, scale);
      (*jacobian)(row, layout_.u()) = -kLn2 * th * consumed * scale;
    }
  }

  for (int c = 0; c < static_cast<int>(spec_.cuts.size()); ++c) {
    const EpigraphCut& cut = spec_.cuts[c];
    const int var = cut.var == EpigraphCut::Var::U ? layout_.u() : layout_.v();
    const int row = cut_constraint(c);
    values(row) = x(var) + cut.offset - x(layout_.t());
    if (jacobian) {
      (*jacobian)(row, var) = 1.0;
      (*jacobian)(row, layout_.t()) = -1.0;
    }
  }
}

void ConvexSubproblem::add_constraint_hessians(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& weights,
                                               Eigen::MatrixXd& hess) const {
  const NetworkInstance& inst = model_.instance();
  const int nk = inst.n_blocks();
  const int nq = layout_.q_count();
  const Eigen::MatrixXd q = layout_.q_matrix(x);
  auto qblock = hess.topLeftCorner(nq, nq);

  // Accumulated weight of each user's rate bound across all constraints that
  // contain it.
  Eigen::VectorXd rate_weight = Eigen::VectorXd::Zero(n_);

  for (int i = 0; i < n_; ++i) {
    const double w = weights(power_constraint(i));
    if (w != 0.0) {
      for (int k = 0; k < nk; ++k) {
        hess(layout_.q(i, k), layout_.q(i, k)) +=
            -w * kLn2Sq * std::exp2(q(i, k)) / inst.max_power(i);
      }
    }
    rate_weight(i) += weights(rate_constraint(i)) / rate_scale_;
  }

  // Cost term th * (mu sum_k 2^q_ik + Pst) with th = 2^var is the exponential
  // of an affine function of (q, var); its Hessian is ln2^2 * e * [1 1; 1 1]
  // per q-entry plus ln2^2 * Pst * th on (var, var).
  auto add_cost = [&](int user, int var, double scale) {
    const double th = std::exp2(x(var));
    const double mu = inst.amp_inefficiency(user);
    double diag_var = inst.static_power(user) * th;
    for (int k = 0; k < nk; ++k) {
      const int r = layout_.q(user, k);
      const double e = mu * std::exp2(q(user, k)) * th;
      hess(r, r) -= scale * kLn2Sq * e;
      hess(r, var) -= scale * kLn2Sq * e;
      hess(var, r) -= scale * kLn2Sq * e;
      diag_var += e;
    }
    hess(var, var) -= scale * kLn2Sq * diag_var;
  };

  for (int i = 0; i < n_; ++i) {
    const double w = weights(psi_constraint(i)) / rate_scale_;
    if (w == 0.0) continue;
    rate_weight(i) += w;
    add_cost(i, layout_.threshold_of(i), w);
  }

  if (spec_.has_total_constraint) {
    const double w = weights(total_constraint()) / (n_ * rate_scale_);
    if (w != 0.0) {
      for (int i = 0; i < n_; ++i) {
        rate_weight(i) += w;
        add_cost(i, layout_.u(), w);
      }
    }
  }

  for (int i = 0; i < n_; ++i) {
    if (rate_weight(i) != 0.0) model_.add_rate_hessian(q, i, rate_weight(i), qblock);
  }
}

Eigen::VectorXd ConvexSubproblem::make_hint(const Eigen::MatrixXd& q,
                                            const MetricsReport& report) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout_.size());
  layout_.set_q(x, q);
  if (spec_.shared_thresholds) {
    x(layout_.u()) = std::log2(report.ee_total);
    x(layout_.v()) = std::log2(report.ee_min);
  }
  if (layout_.t() >= 0) {
    x(layout_.t()) = log_objective(scalarization_, x(layout_.u()), x(layout_.v()));
  }
  if (spec_.kind == ScalarizationKind::ProductEE) {
    for (int i = 0; i < n_; ++i) {
      x(layout_.threshold_of(i)) = std::log2(report.ee(i));
    }
  }
  return x;
}

ThresholdRoots threshold_roots(const SurrogateModel& model,
                               const Eigen::MatrixXd& q) {
  const NetworkInstance& inst = model.instance();
  const int n = inst.n_users();
  ThresholdRoots out;
  out.v_user.resize(n);
  double rate_sum = 0.0;
  double consumed_sum = 0.0;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double r = model.rate(q, i).value;
    double consumed = inst.static_power(i);
    for (int k = 0; k < inst.n_blocks(); ++k) {
      consumed += inst.amp_inefficiency(i) * std::exp2(q(i, k));
    }
    out.v_user(i) = r > 0.0 ? std::log2(r / consumed) : neg_inf;
    rate_sum += r;
    consumed_sum += consumed;
  }
  out.u = rate_sum > 0.0 ? std::log2(rate_sum / consumed_sum) : neg_inf;
  return out;
}

void place_thresholds(const ConvexSubproblem& sub, Eigen::VectorXd& x,
                      double delta) {
  const VariableLayout& lay = sub.layout();
  const ThresholdRoots roots = threshold_roots(sub.model(), lay.q_matrix(x));
  if (sub.spec().shared_thresholds) {
    x(lay.u()) = roots.u - delta;
    x(lay.v()) = roots.v() - delta;
  } else {
    for (int i = 0; i < lay.n_users(); ++i) {
      x(lay.threshold_of(i)) = roots.v_user(i) - delta;
    }
  }
  if (lay.t() >= 0) {
    double t = std::numeric_limits<double>::infinity();
    for (const EpigraphCut& cut : sub.spec().cuts) {
      const int var = cut.var == EpigraphCut::Var::U ? lay.u() : lay.v();
      t = std::min(t, x(var) + cut.offset);
    }
    x(lay.t()) = t - delta;
  }
}

Eigen::VectorXd strictly_feasible_start(const ConvexSubproblem& sub,
                                        const Eigen::VectorXd& hint,
                                        const BarrierSettings& settings,
                                        double delta) {
  const VariableLayout& lay = sub.layout();
  const NetworkInstance& inst = sub.model().instance();
  if (hint.size() != lay.size()) throw DimensionError("hint has wrong size");
  Eigen::VectorXd x = hint;

  // Pull tight power budgets strictly inside.
  Eigen::MatrixXd q = lay.q_matrix(x);
  for (int i = 0; i < lay.n_users(); ++i) {
    double total = 0.0;
    for (int k = 0; k < lay.n_blocks(); ++k) total += std::exp2(q(i, k));
    const double target = (1.0 - delta) * inst.max_power(i);
    if (total > target) q.row(i).array() += std::log2(target / total);
  }
  lay.set_q(x, q);

  Eigen::VectorXd c(sub.constraint_count());
  sub.constraints(x, c, nullptr);
  bool rates_ok = true;
  for (int i = 0; i < lay.n_users(); ++i) {
    rates_ok = rates_ok && c(sub.rate_constraint(i)) > 0.0;
  }

  if (!rates_ok) {
    const RateFeasibilityProgram feas(sub);
    const MinSlackProgram phase_one(feas);
    Eigen::VectorXd z(phase_one.dimension());
    z.head(lay.q_count()) = x.head(lay.q_count());
    Eigen::VectorXd cf(feas.constraint_count());
    feas.constraints(z.head(lay.q_count()), cf, nullptr);
    z(lay.q_count()) = cf.minCoeff() - 1.0;
    const BarrierResult r = solve_barrier(phase_one, z, settings, 1e-6);
    if (!r.stopped_early) {
      if (r.objective <= 0.0) {
        throw InfeasibleSubproblem(
            "rate floors are unattainable under the current minorant "
            "(phase-I min slack " + std::to_string(r.objective) + ")");
      }
    }
    x.head(lay.q_count()) = r.x.head(lay.q_count());
  }

  place_thresholds(sub, x, delta);
  sub.constraints(x, c, nullptr);
  if (!c.allFinite() || (c.array() <= 0.0).any()) {
    throw InfeasibleSubproblem("could not construct a strictly feasible start");
  }
  return x;
}

SubproblemSolution solve(const ConvexSubproblem& sub,
                         const Eigen::VectorXd& start,
                         const BarrierSettings& settings) {
  const BarrierResult r = solve_barrier(sub, start, settings);
  const VariableLayout& lay = sub.layout();
  SubproblemSolution out;
  out.x = r.x;
  out.q = lay.q_matrix(r.x);
  out.u = lay.u() >= 0 ? r.x(lay.u()) : std::nan("");
  out.v = lay.v() >= 0 ? r.x(lay.v()) : std::nan("");
  const int aux = lay.size() - lay.q_count() - (lay.u() >= 0 ? 2 : 0);
  out.auxiliary = r.x.tail(aux);
  out.multipliers = r.multipliers;
  out.objective = r.objective;
  out.kkt_residual = r.kkt_residual;
  out.newton_iterations = r.newton_iterations;
  out.status = r.status;
  return out;
}

}  // namespace eeopt
