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

#include "eeopt/network.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "eeopt/errors.hpp"

namespace eeopt {
namespace {

void check_shape(const NetworkInstance& instance, const PowerAllocation& alloc) {
  if (alloc.n_users() != instance.n_users() ||
      alloc.n_blocks() != instance.n_blocks()) {
    std::ostringstream os;
    os << "allocation is " << alloc.n_users() << "x" << alloc.n_blocks()
       << " but instance is " << instance.n_users() << "x"
       << instance.n_blocks();
    throw DimensionError(os.str());
  }
}

void check_nonnegative(const PowerAllocation& alloc) {
  if ((alloc.watts().array() < 0.0).any() || !alloc.watts().allFinite()) {
    throw DomainError("allocation must be finite and nonnegative");
  }
}

bool positive_finite(const Eigen::ArrayXd& a) {
  return a.allFinite() && (a > 0.0).all();
}

}  // namespace

NetworkInstance::NetworkInstance(Parameters params) : p_(std::move(params)) {
  const auto n = p_.static_power.size();
  const auto k = static_cast<Eigen::Index>(p_.gains.size());
  if (n < 1 || k < 1) throw DimensionError("instance needs N >= 1 and K >= 1");
  if (p_.amp_inefficiency.size() != n || p_.max_power.size() != n ||
      p_.min_rate.size() != n || p_.noise.rows() != n || p_.noise.cols() != k) {
    throw DimensionError("per-user vectors and noise matrix must be N / NxK");
  }
  for (const auto& g : p_.gains) {
    if (g.rows() != n || g.cols() != n) {
      throw DimensionError("every per-block gain matrix must be N x N");
    }
    if (!g.allFinite() || (g.array() < 0.0).any()) {
      throw DomainError("channel gains must be finite and nonnegative");
    }
    if (!(g.diagonal().array() > 0.0).all()) {
      throw DomainError("direct gains must be strictly positive");
    }
  }
  if (!(std::isfinite(p_.bandwidth_per_block) && p_.bandwidth_per_block > 0.0)) {
    throw DomainError("bandwidth per block must be positive");
  }
  if (!positive_finite(p_.noise.array()) ||
      !positive_finite(p_.static_power.array()) ||
      !positive_finite(p_.max_power.array())) {
    throw DomainError("noise, static power and max power must be positive");
  }
  if (!p_.amp_inefficiency.allFinite() ||
      (p_.amp_inefficiency.array() < 1.0).any()) {
    throw DomainError("amplifier inefficiency must be >= 1");
  }
  if (!p_.min_rate.allFinite() || (p_.min_rate.array() < 0.0).any()) {
    throw DomainError("minimum rates must be nonnegative");
  }
}

// Single site for base-2 logarithms used by the rate model.
double log2_of(double x) { return std::log(x) / std::numbers::ln2; }

Eigen::MatrixXd sinr(const NetworkInstance& instance,
                     const PowerAllocation& alloc) {
  check_shape(instance, alloc);
  check_nonnegative(alloc);
  const int n = instance.n_users();
  const int nk = instance.n_blocks();
  const Eigen::MatrixXd& p = alloc.watts();
  Eigen::MatrixXd out(n, nk);
  for (int k = 0; k < nk; ++k) {
    const Eigen::MatrixXd& g = instance.block_gains(k);
    for (int i = 0; i < n; ++i) {
      double interference = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) interference += g(j, i) * p(j, k);
      }
      out(i, k) = g(i, i) * p(i, k) / (interference + instance.noise(i, k));
    }
  }
  return out;
}

double jain_index(const Eigen::VectorXd& values) {
  const double sum_sq = values.squaredNorm();
  if (sum_sq == 0.0) return 1.0;
  const double s = values.sum();
  return s * s / (static_cast<double>(values.size()) * sum_sq);
}

MetricsReport evaluate(const NetworkInstance& instance,
                       const PowerAllocation& alloc) {
  MetricsReport r;
  r.sinr = sinr(instance, alloc);
  const int n = instance.n_users();
  r.rate.resize(n);
  r.power.resize(n);
  r.ee.resize(n);
  for (int i = 0; i < n; ++i) {
    double bits = 0.0;
    for (int k = 0; k < instance.n_blocks(); ++k) {
      bits += log2_of(1.0 + r.sinr(i, k));
    }
    r.rate(i) = instance.bandwidth_per_block() * bits;
    r.power(i) = instance.amp_inefficiency(i) * alloc.user_total(i) +
                 instance.static_power(i);
    r.ee(i) = r.rate(i) / r.power(i);
  }
  r.rate_total = r.rate.sum();
  r.power_total = r.power.sum();
  r.ee_total = r.rate_total / r.power_total;
  r.ee_min = r.ee.minCoeff();
  r.jain_index = jain_index(r.ee);
  return r;
}

FeasibilityReport is_feasible(const NetworkInstance& instance,
                              const PowerAllocation& alloc, double tol) {
  check_shape(instance, alloc);
  FeasibilityReport out;
  const Eigen::MatrixXd& p = alloc.watts();
  bool has_negative = false;
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = 0; k < p.cols(); ++k) {
      if (!(p(i, k) >= 0.0)) {
        has_negative = true;
        out.violations.push_back(
            {ConstraintViolation::Kind::Negative, i, k, p(i, k)});
      }
    }
  }
  for (int i = 0; i < instance.n_users(); ++i) {
    const double slack = instance.max_power(i) - alloc.user_total(i);
    if (alloc.user_total(i) > instance.max_power(i) * (1.0 + tol)) {
      out.violations.push_back(
          {ConstraintViolation::Kind::PowerBudget, i, -1, slack});
    }
  }
  if (!has_negative) {
    const MetricsReport m = evaluate(instance, alloc);
    for (int i = 0; i < instance.n_users(); ++i) {
      if (m.rate(i) < instance.min_rate(i) * (1.0 - tol)) {
        out.violations.push_back({ConstraintViolation::Kind::MinRate, i, -1,
                                  m.rate(i) - instance.min_rate(i)});
      }
    }
  }
  out.feasible = out.violations.empty();
  return out;
}

std::string describe(const ConstraintViolation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case ConstraintViolation::Kind::Negative:
      os << "negative power p[" << v.user << "][" << v.block << "]";
      break;
    case ConstraintViolation::Kind::PowerBudget:
      os << "power budget of user " << v.user;
      break;
    case ConstraintViolation::Kind::MinRate:
      os << "minimum rate of user " << v.user;
      break;
  }
  os << " (slack " << v.slack << ")";
  return os.str();
}

}  // namespace eeopt
