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

#ifndef EEOPT_SCALARIZATION_HPP_
#define EEOPT_SCALARIZATION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "eeopt/network.hpp"

namespace eeopt {

enum class ScalarizationKind { WeightedProduct, WeightedMinimum, ProductEE };

std::string_view to_string(ScalarizationKind kind);
ScalarizationKind scalarization_kind_from_string(std::string_view name);

/// How the total EE x and minimum EE y are combined into one objective.
///   WeightedProduct:  x^w y^(1-w)
///   WeightedMinimum:  min(x / w, y / (1 - w)),  0 < w < 1
///   ProductEE:        prod_i EE_i (baseline, ignores w)
struct Scalarization {
  ScalarizationKind kind = ScalarizationKind::WeightedProduct;
  double weight = 1.0;

  // Validating factories; throw DomainError for w outside [0, 1] or for the
  // weighted minimum at w in {0, 1}.
  static Scalarization weighted_product(double w);
  static Scalarization weighted_minimum(double w);
  static Scalarization product_ee();

  void validate() const;
};

// f(u, v) with u = log2 TEE, v = log2 MEE. Not defined for ProductEE.
double log_objective(const Scalarization& s, double u, double v);

// log2 of the product-EE objective given per-user log2 EEs.
double log_product_objective(const Eigen::VectorXd& log2_ee);

// G(p) evaluated on a metrics report, without the log transform.
double direct_objective(const Scalarization& s, const MetricsReport& report);

// Objective value in the log domain for a report: log2 G(p).
double log_objective(const Scalarization& s, const MetricsReport& report);

// u - offset >= t style cut used by the epigraph form of the weighted minimum.
struct EpigraphCut {
  enum class Var { U, V } var;
  double offset;  // constraint: var + offset >= t
};

/// Shape of the convex subproblem objective for one scalarization.
/// The objective is always linear in the variables listed here.
struct ObjectiveSpec {
  ScalarizationKind kind;
  double weight_u = 0.0;  // coefficient on u (WeightedProduct)
  double weight_v = 0.0;  // coefficient on v (WeightedProduct)
  bool shared_thresholds = true;  // u and v present (false for ProductEE)
  int auxiliary_count = 0;  // t for WeightedMinimum, v_1..v_N for ProductEE
  std::vector<EpigraphCut> cuts;
  int psi_constraints = 0;  // number of per-user EE threshold constraints
  bool has_total_constraint = true;
};

ObjectiveSpec subproblem_objective_spec(const Scalarization& s, int n_users);

}  // namespace eeopt

#endif  // EEOPT_SCALARIZATION_HPP_
