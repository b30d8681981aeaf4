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

#ifndef EEOPT_NETWORK_HPP_
#define EEOPT_NETWORK_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eeopt {

/// Physical description of an interference-limited multi-carrier network.
///
/// User i transmits on K orthogonal resource blocks toward its intended
/// receiver. `gain(j, i, k)` is the linear power gain from transmitter j to
/// user i's intended receiver on block k. All quantities are SI: watts, Hz,
/// bit/s. Immutable once constructed; the constructor validates every
/// invariant and throws DomainError / DimensionError otherwise.
class NetworkInstance {
 public:
  struct Parameters {
    double bandwidth_per_block = 0.0;  // Hz
    // gains[k](j, i): transmitter j -> receiver of user i, block k.
    std::vector<Eigen::MatrixXd> gains;
    Eigen::MatrixXd noise;             // N x K, W
    Eigen::VectorXd amp_inefficiency;  // mu_i = 1 / xi_i >= 1
    Eigen::VectorXd static_power;      // W
    Eigen::VectorXd max_power;         // W
    Eigen::VectorXd min_rate;          // bit/s
  };

  explicit NetworkInstance(Parameters params);

  int n_users() const { return static_cast<int>(p_.static_power.size()); }
  int n_blocks() const { return static_cast<int>(p_.gains.size()); }
  double bandwidth_per_block() const { return p_.bandwidth_per_block; }
  double gain(int tx, int rx_user, int block) const {
    return p_.gains[block](tx, rx_user);
  }
  const Eigen::MatrixXd& block_gains(int block) const { return p_.gains[block]; }
  double noise(int user, int block) const { return p_.noise(user, block); }
  const Eigen::MatrixXd& noise() const { return p_.noise; }
  double amp_inefficiency(int user) const { return p_.amp_inefficiency(user); }
  double static_power(int user) const { return p_.static_power(user); }
  double max_power(int user) const { return p_.max_power(user); }
  double min_rate(int user) const { return p_.min_rate(user); }
  const Parameters& parameters() const { return p_; }

 private:
  Parameters p_;
};

/// N x K matrix of transmit powers in watts. Nonnegativity is checked by the
/// operations that require it, not on construction, so that infeasible
/// allocations can still be diagnosed by is_feasible().
class PowerAllocation {
 public:
  PowerAllocation() = default;
  explicit PowerAllocation(Eigen::MatrixXd watts) : p_(std::move(watts)) {}

  int n_users() const { return static_cast<int>(p_.rows()); }
  int n_blocks() const { return static_cast<int>(p_.cols()); }
  double operator()(int user, int block) const { return p_(user, block); }
  const Eigen::MatrixXd& watts() const { return p_; }
  double user_total(int user) const { return p_.row(user).sum(); }

 private:
  Eigen::MatrixXd p_;
};

struct MetricsReport {
  Eigen::MatrixXd sinr;  // N x K
  Eigen::VectorXd rate;  // bit/s
  double rate_total = 0.0;
  Eigen::VectorXd power;  // consumed, W
  double power_total = 0.0;
  Eigen::VectorXd ee;  // bit/J
  double ee_total = 0.0;
  double ee_min = 0.0;
  double jain_index = 1.0;
};

struct ConstraintViolation {
  enum class Kind { Negative, PowerBudget, MinRate };
  Kind kind;
  int user;
  int block;     // -1 unless kind == Negative
  double slack;  // signed; negative means violated
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<ConstraintViolation> violations;
  explicit operator bool() const { return feasible; }
};

double log2_of(double x);

Eigen::MatrixXd sinr(const NetworkInstance& instance,
                     const PowerAllocation& alloc);

MetricsReport evaluate(const NetworkInstance& instance,
                       const PowerAllocation& alloc);

/// Jain's index of a nonnegative vector; defined as 1 for the all-zero vector.
double jain_index(const Eigen::VectorXd& values);

// tol is relative: budgets may be exceeded and rate floors missed by that
// fraction.
FeasibilityReport is_feasible(const NetworkInstance& instance,
                              const PowerAllocation& alloc, double tol = 1e-9);

std::string describe(const ConstraintViolation& v);

}  // namespace eeopt

#endif  // EEOPT_NETWORK_HPP_
