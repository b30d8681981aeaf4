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

#ifndef EEOPT_TESTS_TEST_SUPPORT_HPP_
#define EEOPT_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eeopt/network.hpp"

namespace eeopt::testing {

// Uniform in log10 between lo and hi.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log10(lo), std::log10(hi));
  return std::pow(10.0, d(rng));
}

// Small random instance: direct gains dominate cross gains on average, but
// not always, so interference-limited cases show up too.
inline NetworkInstance random_instance(std::mt19937_64& rng, int n, int k,
                                       double min_rate = 0.0) {
  NetworkInstance::Parameters p;
  p.bandwidth_per_block = log_uniform(rng, 1.0, 1e6);
  for (int b = 0; b < k; ++b) {
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        g(j, i) = j == i ? log_uniform(rng, 1e-2, 1e2) : log_uniform(rng, 1e-4, 1.0);
      }
    }
    p.gains.push_back(g);
  }
  p.noise = Eigen::MatrixXd::NullaryExpr(
      n, k, [&] { return log_uniform(rng, 1e-3, 1.0); });
  p.amp_inefficiency = Eigen::VectorXd::NullaryExpr(
      n, [&] { return 1.0 + std::uniform_real_distribution<double>(0, 2)(rng); });
  p.static_power =
      Eigen::VectorXd::NullaryExpr(n, [&] { return log_uniform(rng, 0.1, 2.0); });
  p.max_power =
      Eigen::VectorXd::NullaryExpr(n, [&] { return log_uniform(rng, 0.5, 20.0); });
  p.min_rate = Eigen::VectorXd::Constant(n, min_rate);
  return NetworkInstance(std::move(p));
}

// Random strictly positive allocation inside the power budgets.
inline PowerAllocation random_allocation(std::mt19937_64& rng,
                                         const NetworkInstance& inst) {
  Eigen::MatrixXd w(inst.n_users(), inst.n_blocks());
  for (int i = 0; i < inst.n_users(); ++i) {
    for (int k = 0; k < inst.n_blocks(); ++k) w(i, k) = log_uniform(rng, 1e-3, 1.0);
    w.row(i) *= inst.max_power(i) *
                std::uniform_real_distribution<double>(0.05, 1.0)(rng) /
                w.row(i).sum();
  }
  return PowerAllocation(w);
}

// Same-valued gains on every block; handy for hand-built examples.
inline NetworkInstance flat_instance(double bandwidth,
                                     const Eigen::MatrixXd& gains, int k,
                                     const Eigen::VectorXd& noise,
                                     const Eigen::VectorXd& mu,
                                     const Eigen::VectorXd& pst,
                                     const Eigen::VectorXd& pmax,
                                     const Eigen::VectorXd& rth) {
  NetworkInstance::Parameters p;
  p.bandwidth_per_block = bandwidth;
  p.gains.assign(k, gains);
  p.noise = noise.replicate(1, k);
  p.amp_inefficiency = mu;
  p.static_power = pst;
  p.max_power = pmax;
  p.min_rate = rth;
  return NetworkInstance(std::move(p));
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Single-user instance {B, omega, noise, mu, Pst, Pmax, Rth}.
inline NetworkInstance single_user(double b, double omega, double noise,
                                   double mu, double pst, double pmax,
                                   double rth = 0.0) {
  return flat_instance(b, Eigen::MatrixXd::Constant(1, 1, omega), 1, vec({noise}),
                       vec({mu}), vec({pst}), vec({pmax}), vec({rth}));
}

}  // namespace eeopt::testing

#endif  // EEOPT_TESTS_TEST_SUPPORT_HPP_
