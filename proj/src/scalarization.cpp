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

#include "eeopt/scalarization.hpp"

#include <algorithm>
#include <cmath>

#include "eeopt/errors.hpp"

namespace eeopt {

std::string_view to_string(ScalarizationKind kind) {
  switch (kind) {
    case ScalarizationKind::WeightedProduct:
      return "weighted_product";
    case ScalarizationKind::WeightedMinimum:
      return "weighted_minimum";
    case ScalarizationKind::ProductEE:
      return "product_ee";
  }
  return "unknown";
}

ScalarizationKind scalarization_kind_from_string(std::string_view name) {
  if (name == "weighted_product" || name == "wp") {
    return ScalarizationKind::WeightedProduct;
  }
  if (name == "weighted_minimum" || name == "wm") {
    return ScalarizationKind::WeightedMinimum;
  }
  if (name == "product_ee" || name == "pee") return ScalarizationKind::ProductEE;
  throw DomainError("unknown scalarization '" + std::string(name) + "'");
}

Scalarization Scalarization::weighted_product(double w) {
  Scalarization s{ScalarizationKind::WeightedProduct, w};
  s.validate();
  return s;
}

Scalarization Scalarization::weighted_minimum(double w) {
  Scalarization s{ScalarizationKind::WeightedMinimum, w};
  s.validate();
  return s;
}

Scalarization Scalarization::product_ee() {
  return {ScalarizationKind::ProductEE, 0.0};
}

void Scalarization::validate() const {
  if (kind == ScalarizationKind::ProductEE) return;
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw DomainError("priority weight must lie in [0, 1]");
  }
  if (kind == ScalarizationKind::WeightedMinimum &&
      (weight == 0.0 || weight == 1.0)) {
    throw DomainError(
        "weighted minimum is undefined at w = 0 or 1; use the weighted "
        "product for the pure MEE / TEE endpoints");
  }
}

double log_objective(const Scalarization& s, double u, double v) {
  s.validate();
  switch (s.kind) {
    case ScalarizationKind::WeightedProduct:
      // Exact endpoints so that w = 1 returns u bit-for-bit.
      if (s.weight == 1.0) return u;
      if (s.weight == 0.0) return v;
      return s.weight * u + (1.0 - s.weight) * v;
    case ScalarizationKind::WeightedMinimum:
      return std::min(u - std::log2(s.weight), v - std::log2(1.0 - s.weight));
    case ScalarizationKind::ProductEE:
      break;
  }
  throw DomainError("log_objective(u, v) is not defined for product EE");
}

double log_product_objective(const Eigen::VectorXd& log2_ee) {
  return log2_ee.sum();
}

double direct_objective(const Scalarization& s, const MetricsReport& report) {
  s.validate();
  const double x = report.ee_total;
  const double y = report.ee_min;
  switch (s.kind) {
    case ScalarizationKind::WeightedProduct:
      if (s.weight == 1.0) return x;
      if (s.weight == 0.0) return y;
      return std::pow(x, s.weight) * std::pow(y, 1.0 - s.weight);
    case ScalarizationKind::WeightedMinimum:
      return std::min(x / s.weight, y / (1.0 - s.weight));
    case ScalarizationKind::ProductEE:
      return report.ee.prod();
  }
  return 0.0;
}

double log_objective(const Scalarization& s, const MetricsReport& report) {
  if (s.kind == ScalarizationKind::ProductEE) {
    return log_product_objective(
        report.ee.unaryExpr([](double e) { return std::log2(e); }));
  }
  return log_objective(s, std::log2(report.ee_total), std::log2(report.ee_min));
}

ObjectiveSpec subproblem_objective_spec(const Scalarization& s, int n_users) {
  s.validate();
  ObjectiveSpec spec;
  spec.kind = s.kind;
  switch (s.kind) {
    case ScalarizationKind::WeightedProduct:
      spec.weight_u = s.weight;
      spec.weight_v = 1.0 - s.weight;
      spec.psi_constraints = n_users;
      break;
    case ScalarizationKind::WeightedMinimum:
      spec.auxiliary_count = 1;
      spec.cuts = {{EpigraphCut::Var::U, -std::log2(s.weight)},
                   {EpigraphCut::Var::V, -std::log2(1.0 - s.weight)}};
      spec.psi_constraints = n_users;
      break;
    case ScalarizationKind::ProductEE:
      spec.shared_thresholds = false;
      spec.auxiliary_count = n_users;
      spec.psi_constraints = n_users;
      spec.has_total_constraint = false;
      break;
  }
  return spec;
}

}  // namespace eeopt
