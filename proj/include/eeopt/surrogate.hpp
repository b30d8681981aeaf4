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

#ifndef EEOPT_SURROGATE_HPP_
#define EEOPT_SURROGATE_HPP_

#include <Eigen/Dense>

#include "eeopt/network.hpp"

namespace eeopt {

// Coefficients of the tangent lower bound
//   log2(1 + g) >= a * log2(g) + b,  tight at g = g'.
struct BoundCoefficients {
  double a = 0.0;
  double b = 0.0;
};

// Throws DomainError for negative or non-finite input. g' = 0 maps to (0, 0).
BoundCoefficients bound_coefficients(double gamma_prime);

// Value of a scalar function of the log2-power matrix q (plus at most one
// extra scalar such as a log2 EE threshold) together with its gradient.
struct SurrogateValue {
  double value = 0.0;
  Eigen::MatrixXd dq;    // N x K
  double dscalar = 0.0;  // derivative w.r.t. the extra scalar, if any
};

/// Concave minorants of the rate/EE constraint functions in the variables
/// q = log2 p, built around an expansion point q'.
///
/// Holds a pointer to the instance; the instance must outlive the model.
class SurrogateModel {
 public:
  // Requires a strictly positive allocation (q = log2 p must be finite).
  static SurrogateModel build(const NetworkInstance& instance,
                              const PowerAllocation& alloc);

  const NetworkInstance& instance() const { return *instance_; }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }
  const Eigen::MatrixXd& expansion_sinr() const { return gamma_; }
  const Eigen::MatrixXd& expansion_point() const { return q0_; }

  // Lower bound on user i's rate as a function of q (bit/s).
  SurrogateValue rate(const Eigen::MatrixXd& q, int user) const;
  // Sum of the per-user rate bounds.
  SurrogateValue total_rate(const Eigen::MatrixXd& q) const;
  // rate_i(q) - mu_i sum_k 2^(q_ik + v) - Pst_i 2^v; dscalar is d/dv.
  SurrogateValue psi(const Eigen::MatrixXd& q, double v, int user) const;
  // total_rate(q) - sum_i mu_i sum_k 2^(q_ik + u) - (sum_i Pst_i) 2^u.
  SurrogateValue g(const Eigen::MatrixXd& q, double u) const;

  // hess += weight * Hessian of rate(., user) in the q-block, where q entry
  // (i, k) maps to row/column i * K + k.
  void add_rate_hessian(const Eigen::MatrixXd& q, int user, double weight,
                        Eigen::Ref<Eigen::MatrixXd> hess) const;

 private:
  SurrogateModel() = default;

  const NetworkInstance* instance_ = nullptr;
  Eigen::MatrixXd a_, b_, gamma_, q0_;
  // b + a * log2(direct gain), precomputed per (i, k).
  Eigen::MatrixXd offset_;
};

// The original (non-convexified) functions in log2-power variables.
double true_rate(const NetworkInstance& instance, const Eigen::MatrixXd& q,
                 int user);
double true_psi(const NetworkInstance& instance, const Eigen::MatrixXd& q,
                double v, int user);
double true_g(const NetworkInstance& instance, const Eigen::MatrixXd& q,
              double u);

PowerAllocation to_power(const Eigen::MatrixXd& q);
Eigen::MatrixXd to_log2_power(const PowerAllocation& alloc);

}  // namespace eeopt

#endif  // EEOPT_SURROGATE_HPP_
