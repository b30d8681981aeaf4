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

#include "eeopt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "eeopt/errors.hpp"

namespace eeopt {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Interference-plus-noise seen by user i on block k, in log2 form:
// returns log2(sum_{j != i} w_jik 2^q_jk + N_ik) and fills weights[j] with the
// share of term j in the sum (0 for j == i and for zero gains).
double log2_interference(const NetworkInstance& inst, const Eigen::MatrixXd& q,
                         int i, int k, std::vector<double>& weights) {
  const int n = inst.n_users();
  weights.assign(n, 0.0);
  std::vector<double> expo(n, -std::numeric_limits<double>::infinity());
  const double noise_expo = log2_of(inst.noise(i, k));
  double top = noise_expo;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double w = inst.gain(j, i, k);
    if (w <= 0.0) continue;
    expo[j] = q(j, k) + log2_of(w);
    top = std::max(top, expo[j]);
  }
  double sum = std::exp2(noise_expo - top);
  for (int j = 0; j < n; ++j) {
    if (j == i || !std::isfinite(expo[j])) continue;
    weights[j] = std::exp2(expo[j] - top);
    sum += weights[j];
  }
  for (double& w : weights) w /= sum;
  return top + std::log2(sum);
}

void check_q_shape(const NetworkInstance& inst, const Eigen::MatrixXd& q) {
  if (q.rows() != inst.n_users() || q.cols() != inst.n_blocks()) {
    throw DimensionError("q must be N x K");
  }
}

}  // namespace

BoundCoefficients bound_coefficients(double gamma_prime) {
  if (!std::isfinite(gamma_prime) || gamma_prime < 0.0) {
    throw DomainError("bound_coefficients: SINR must be finite and >= 0");
  }
  if (gamma_prime == 0.0) return {0.0, 0.0};
  const double a = gamma_prime / (1.0 + gamma_prime);
  return {a, std::log2(1.0 + gamma_prime) - a * std::log2(gamma_prime)};
}

SurrogateModel SurrogateModel::build(const NetworkInstance& instance,
                                     const PowerAllocation& alloc) {
  if (alloc.n_users() != instance.n_users() ||
      alloc.n_blocks() != instance.n_blocks()) {
    throw DimensionError("allocation shape does not match instance");
  }
  if (!(alloc.watts().array() > 0.0).all() || !alloc.watts().allFinite()) {
    throw DomainError(
        "surrogate expansion needs a strictly positive allocation; start the "
        "iteration from a point with every p[i][k] > 0");
  }
  SurrogateModel m;
  m.instance_ = &instance;
  m.gamma_ = sinr(instance, alloc);
  m.q0_ = to_log2_power(alloc);
  const int n = instance.n_users();
  const int nk = instance.n_blocks();
  m.a_.resize(n, nk);
  m.b_.resize(n, nk);
  m.offset_.resize(n, nk);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < nk; ++k) {
      const auto c = bound_coefficients(m.gamma_(i, k));
      m.a_(i, k) = c.a;
      m.b_(i, k) = c.b;
      m.offset_(i, k) = c.b + c.a * log2_of(instance.gain(i, i, k));
    }
  }
  return m;
}

SurrogateValue SurrogateModel::rate(const Eigen::MatrixXd& q, int user) const {
  const NetworkInstance& inst = *instance_;
  check_q_shape(inst, q);
  const double bw = inst.bandwidth_per_block();
  SurrogateValue out;
  out.dq = Eigen::MatrixXd::Zero(inst.n_users(), inst.n_blocks());
  std::vector<double> share;
  double bits = 0.0;
  for (int k = 0; k < inst.n_blocks(); ++k) {
    const double a = a_(user, k);
    if (a == 0.0) {
      bits += b_(user, k);
      continue;
    }
    const double interf = log2_interference(inst, q, user, k, share);
    bits += offset_(user, k) + a * q(user, k) - a * interf;
    out.dq(user, k) += bw * a;
    for (int j = 0; j < inst.n_users(); ++j) {
      if (share[j] != 0.0) out.dq(j, k) -= bw * a * share[j];
    }
  }
  out.value = bw * bits;
  return out;
}

SurrogateValue SurrogateModel::total_rate(const Eigen::MatrixXd& q) const {
  SurrogateValue out = rate(q, 0);
  for (int i = 1; i < instance_->n_users(); ++i) {
    const SurrogateValue r = rate(q, i);
    out.value += r.value;
    out.dq += r.dq;
  }
  return out;
}

SurrogateValue SurrogateModel::psi(const Eigen::MatrixXd& q, double v,
                                   int user) const {
  const NetworkInstance& inst = *instance_;
  SurrogateValue out = rate(q, user);
  const double mu = inst.amp_inefficiency(user);
  double cost = inst.static_power(user) * std::exp2(v);
  for (int k = 0; k < inst.n_blocks(); ++k) {
    const double e = mu * std::exp2(q(user, k) + v);
    cost += e;
    out.dq(user, k) -= kLn2 * e;
  }
  out.value -= cost;
  out.dscalar = -kLn2 * cost;
  return out;
}

SurrogateValue SurrogateModel::g(const Eigen::MatrixXd& q, double u) const {
  const NetworkInstance& inst = *instance_;
  SurrogateValue out = total_rate(q);
  double cost = inst.parameters().static_power.sum() * std::exp2(u);
  for (int i = 0; i < inst.n_users(); ++i) {
    const double mu = inst.amp_inefficiency(i);
    for (int k = 0; k < inst.n_blocks(); ++k) {
      const double e = mu * std::exp2(q(i, k) + u);
      cost += e;
      out.dq(i, k) -= kLn2 * e;
    }
  }
  out.value -= cost;
  out.dscalar = -kLn2 * cost;
  return out;
}

void SurrogateModel::add_rate_hessian(const Eigen::MatrixXd& q, int user,
                                      double weight,
                                      Eigen::Ref<Eigen::MatrixXd> hess) const {
  const NetworkInstance& inst = *instance_;
  const int nk = inst.n_blocks();
  const double bw = inst.bandwidth_per_block();
  std::vector<double> share;
  for (int k = 0; k < nk; ++k) {
    const double a = a_(user, k);
    if (a == 0.0) continue;
    log2_interference(inst, q, user, k, share);
    // d2/dq_j dq_l of log2(sum) = ln2 (s_j delta_jl - s_j s_l)
    const double scale = -weight * bw * a * kLn2;
    for (int j = 0; j < inst.n_users(); ++j) {
      if (share[j] == 0.0) continue;
      const int rj = j * nk + k;
      hess(rj, rj) += scale * share[j];
      for (int l = 0; l < inst.n_users(); ++l) {
        if (share[l] == 0.0) continue;
        hess(rj, l * nk + k) -= scale * share[j] * share[l];
      }
    }
  }
}

double true_rate(const NetworkInstance& instance, const Eigen::MatrixXd& q,
                 int user) {
  check_q_shape(instance, q);
  return evaluate(instance, to_power(q)).rate(user);
}

double true_psi(const NetworkInstance& instance, const Eigen::MatrixXd& q,
                double v, int user) {
  const MetricsReport m = evaluate(instance, to_power(q));
  return m.rate(user) - std::exp2(v) * m.power(user);
}

double true_g(const NetworkInstance& instance, const Eigen::MatrixXd& q,
              double u) {
  const MetricsReport m = evaluate(instance, to_power(q));
  return m.rate_total - std::exp2(u) * m.power_total;
}

PowerAllocation to_power(const Eigen::MatrixXd& q) {
  return PowerAllocation(q.unaryExpr([](double x) { return std::exp2(x); }));
}

Eigen::MatrixXd to_log2_power(const PowerAllocation& alloc) {
  return alloc.watts().unaryExpr([](double x) { return std::log2(x); });
}

}  // namespace eeopt
