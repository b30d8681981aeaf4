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

#include <doctest.h>

#include <cmath>
#include <random>

#include "eeopt/barrier_solver.hpp"
#include "eeopt/errors.hpp"
#include "eeopt/subproblem.hpp"
#include "test_support.hpp"

using namespace eeopt;
using eeopt::testing::vec;

namespace {

// maximize x subject to cap - 2^x >= 0.
class ExpCap : public ConcaveProgram {
 public:
  explicit ExpCap(double cap) : cap_(cap) {}
  int dimension() const override { return 1; }
  int constraint_count() const override { return 1; }
  Eigen::VectorXd objective() const override { return vec({1.0}); }
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                   Eigen::MatrixXd* jac) const override {
    values = vec({cap_ - std::exp2(x(0))});
    if (jac) *jac = Eigen::MatrixXd::Constant(1, 1, -std::log(2.0) * std::exp2(x(0)));
  }
  void add_constraint_hessians(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                               Eigen::MatrixXd& h) const override {
    h(0, 0) += -w(0) * std::log(2.0) * std::log(2.0) * std::exp2(x(0));
  }

 private:
  double cap_;
};

// Objective c, one constraint 1 - |x|^2 >= 0.
class Ball : public ConcaveProgram {
 public:
  explicit Ball(Eigen::VectorXd c) : c_(std::move(c)) {}
  int dimension() const override { return static_cast<int>(c_.size()); }
  int constraint_count() const override { return 1; }
  Eigen::VectorXd objective() const override { return c_; }
  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& values,
                   Eigen::MatrixXd* jac) const override {
    values = vec({1.0 - x.squaredNorm()});
    if (jac) *jac = -2.0 * x.transpose();
  }
  void add_constraint_hessians(const Eigen::VectorXd&, const Eigen::VectorXd& w,
                               Eigen::MatrixXd& h) const override {
    h.diagonal().array() -= 2.0 * w(0);
  }

 private:
  Eigen::VectorXd c_;
};

struct Prepared {
  SurrogateModel model;
  MetricsReport report;
  Eigen::MatrixXd q0;
};

Prepared prepare(const NetworkInstance& inst, const PowerAllocation& p) {
  return {SurrogateModel::build(inst, p), evaluate(inst, p), to_log2_power(p)};
}

Eigen::VectorXd start_for(const ConvexSubproblem& sub, const Prepared& pr,
                          const BarrierSettings& settings = {}) {
  return strictly_feasible_start(sub, sub.make_hint(pr.q0, pr.report), settings);
}

// Independent evaluation of the rate minorant for K = 1.
struct Minorant {
  const NetworkInstance& inst;
  Eigen::VectorXd a, b;
  Minorant(const NetworkInstance& in, const Eigen::VectorXd& q0) : inst(in) {
    const int n = in.n_users();
    a.resize(n);
    b.resize(n);
    for (int i = 0; i < n; ++i) {
      double interf = in.noise(i, 0);
      for (int j = 0; j < n; ++j) {
        if (j != i) interf += in.gain(j, i, 0) * std::exp2(q0(j));
      }
      const double g = in.gain(i, i, 0) * std::exp2(q0(i)) / interf;
      a(i) = g / (1.0 + g);
      b(i) = std::log2(1.0 + g) - a(i) * std::log2(g);
    }
  }
  double rate(const Eigen::VectorXd& q, int i) const {
    double interf = inst.noise(i, 0);
    for (int j = 0; j < inst.n_users(); ++j) {
      if (j != i) interf += inst.gain(j, i, 0) * std::exp2(q(j));
    }
    return inst.bandwidth_per_block() *
           (b(i) + a(i) * (std::log2(inst.gain(i, i, 0)) + q(i) - std::log2(interf)));
  }
  double power(const Eigen::VectorXd& q, int i) const {
    return inst.amp_inefficiency(i) * std::exp2(q(i)) + inst.static_power(i);
  }
};

// Largest x with f(x) >= 0 for f decreasing, by bisection.
template <class F>
double decreasing_root(F f, double lo, double hi) {
  if (f(lo) < 0.0) return -INFINITY;
  while (f(hi) >= 0.0) hi += 64.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("barrier toy: single active exponential constraint") {
  const ExpCap prog(5.0);
  const BarrierResult r = solve_barrier(prog, vec({0.0}), BarrierSettings{});
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(std::log2(5.0)).epsilon(1e-8));
  CHECK(r.kkt_residual <= 1e-8);
  CHECK(r.objective >= 0.0 - 1e-9);
}

TEST_CASE("barrier on a ball reaches the boundary point along c") {
  const Ball prog(vec({3.0, -4.0}));
  const BarrierResult r = solve_barrier(prog, vec({0.1, 0.2}), BarrierSettings{});
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(0.6).epsilon(1e-7));
  CHECK(r.x(1) == doctest::Approx(-0.8).epsilon(1e-7));
  CHECK(r.multipliers(0) == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("barrier rejects an infeasible start") {
  const ExpCap prog(1.0);
  CHECK_THROWS_AS(solve_barrier(prog, vec({1.0}), BarrierSettings{}), DomainError);
}

TEST_CASE("barrier is deterministic") {
  const Ball prog(vec({1.0, 2.0, -0.5}));
  const auto a = solve_barrier(prog, vec({0.0, 0.0, 0.0}), BarrierSettings{});
  const auto b = solve_barrier(prog, vec({0.0, 0.0, 0.0}), BarrierSettings{});
  CHECK((a.x.array() == b.x.array()).all());
  CHECK(a.newton_iterations == b.newton_iterations);
}

TEST_CASE("kkt residual definition") {
  const Ball prog(vec({3.0, -4.0}));
  // Zero multipliers: the residual is the objective gradient norm.
  CHECK(kkt_residual(prog, vec({0.0, 0.0}), vec({0.0})) == doctest::Approx(4.0));
  const Ball flat(vec({0.0, 0.0}));
  CHECK(kkt_residual(flat, vec({0.2, 0.1}), vec({0.0})) == 0.0);
  // Primal infeasibility shows up.
  CHECK(kkt_residual(flat, vec({2.0, 0.0}), vec({0.0})) == doctest::Approx(3.0));
  // Exact optimum with the right multiplier.
  CHECK(kkt_residual(prog, vec({0.6, -0.8}), vec({2.5})) <= 1e-12);
}

TEST_CASE("phase I finds an interior point of a small box") {
  const Ball prog(vec({1.0}));
  const MinSlackProgram phase(prog);
  CHECK(phase.dimension() == 2);
  // x = 2 violates the ball; s = -4 makes the lifted constraint strict.
  const BarrierResult r =
      solve_barrier(phase, vec({2.0, -4.0}), BarrierSettings{}, 1e-6);
  CHECK(r.stopped_early);
  CHECK(r.x(1) > 0.0);
  CHECK(std::abs(r.x(0)) < 1.0);
}

TEST_CASE("constraint counts per scalarization") {
  std::mt19937_64 rng(4);
  const auto inst = eeopt::testing::random_instance(rng, 3, 2);
  const auto pr = prepare(inst, eeopt::testing::random_allocation(rng, inst));
  const ConvexSubproblem wp(pr.model, Scalarization::weighted_product(0.4));
  CHECK(wp.constraint_count() == 3 * 3 + 1);
  CHECK(wp.dimension() == 3 * 2 + 2);
  const ConvexSubproblem wm(pr.model, Scalarization::weighted_minimum(0.4));
  CHECK(wm.constraint_count() == 3 * 3 + 3);
  CHECK(wm.dimension() == 3 * 2 + 3);
  const ConvexSubproblem pee(pr.model, Scalarization::product_ee());
  CHECK(pee.constraint_count() == 3 * 3);
  CHECK(pee.dimension() == 3 * 2 + 3);
  CHECK(pee.total_constraint() == -1);
}

TEST_CASE("constraint Jacobian and Hessian match finite differences") {
  std::mt19937_64 rng(6);
  for (const Scalarization& s :
       {Scalarization::weighted_product(0.3), Scalarization::weighted_minimum(0.6),
        Scalarization::product_ee()}) {
    const auto inst = eeopt::testing::random_instance(rng, 3, 2);
    const auto pr = prepare(inst, eeopt::testing::random_allocation(rng, inst));
    const ConvexSubproblem sub(pr.model, s);
    const Eigen::VectorXd x = start_for(sub, pr);
    Eigen::VectorXd c;
    Eigen::MatrixXd jac;
    sub.constraints(x, c, &jac);
    const double h = 1e-6;
    for (int d = 0; d < sub.dimension(); ++d) {
      Eigen::VectorXd xp = x, xm = x, cp, cm;
      xp(d) += h;
      xm(d) -= h;
      sub.constraints(xp, cp, nullptr);
      sub.constraints(xm, cm, nullptr);
      const Eigen::VectorXd fd = (cp - cm) / (2 * h);
      CHECK((fd - jac.col(d)).cwiseAbs().maxCoeff() <=
            1e-5 * (1.0 + jac.cwiseAbs().maxCoeff()));
    }
    // Weighted Hessian against differences of the weighted gradient.
    const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(sub.constraint_count(), 0.5, 2.0);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(sub.dimension(), sub.dimension());
    sub.add_constraint_hessians(x, w, hess);
    for (int d = 0; d < sub.dimension(); ++d) {
      Eigen::VectorXd xp = x, xm = x, cp;
      Eigen::MatrixXd jp, jm;
      xp(d) += h;
      xm(d) -= h;
      sub.constraints(xp, cp, &jp);
      sub.constraints(xm, cp, &jm);
      const Eigen::VectorXd fd = (jp - jm).transpose() * w / (2 * h);
      CHECK((fd - hess.col(d)).cwiseAbs().maxCoeff() <=
            1e-4 * (1.0 + hess.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("raising u lowers the total EE constraint") {
  std::mt19937_64 rng(7);
  const auto inst = eeopt::testing::random_instance(rng, 2, 2);
  const auto pr = prepare(inst, eeopt::testing::random_allocation(rng, inst));
  const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(0.5));
  Eigen::VectorXd x = start_for(sub, pr), c0, c1;
  sub.constraints(x, c0, nullptr);
  for (double eps : {1e-6, 1e-3, 0.5}) {
    Eigen::VectorXd y = x;
    y(sub.layout().u()) += eps;
    sub.constraints(y, c1, nullptr);
    CHECK(c1(sub.total_constraint()) < c0(sub.total_constraint()));
  }
}

TEST_CASE("interior start from the expansion point without rate floors") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto inst = eeopt::testing::random_instance(rng, 1 + t % 4, 1 + t % 3);
    const auto pr = prepare(inst, eeopt::testing::random_allocation(rng, inst));
    for (const Scalarization& s :
         {Scalarization::weighted_product(0.5), Scalarization::weighted_minimum(0.5),
          Scalarization::product_ee()}) {
      const ConvexSubproblem sub(pr.model, s);
      const Eigen::VectorXd x = start_for(sub, pr);
      Eigen::VectorXd c;
      sub.constraints(x, c, nullptr);
      CHECK(c.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("single user with a huge budget has an interior start") {
  const auto inst = eeopt::testing::single_user(1.0, 10.0, 1.0, 1.0, 1.0, 1e9);
  const auto pr = prepare(inst, PowerAllocation(Eigen::MatrixXd::Constant(1, 1, 1e9)));
  const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(1.0));
  const Eigen::VectorXd x = start_for(sub, pr);
  Eigen::VectorXd c;
  sub.constraints(x, c, nullptr);
  CHECK(c.minCoeff() > 0.0);
}

TEST_CASE("rate floor above single-user capacity is infeasible") {
  const double b = 2.0, omega = 3.0, noise = 0.5, pmax = 4.0;
  const double capacity = b * std::log2(1.0 + omega * pmax / noise);
  const auto inst =
      eeopt::testing::single_user(b, omega, noise, 1.0, 1.0, pmax, 1.01 * capacity);
  const auto pr = prepare(inst, PowerAllocation(Eigen::MatrixXd::Constant(1, 1, 1.0)));
  const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(1.0));
  CHECK_THROWS_AS(start_for(sub, pr), InfeasibleSubproblem);

  // Just below capacity the floor is attainable at full power, so a start
  // exists once the surrogate is expanded there.
  const auto ok =
      eeopt::testing::single_user(b, omega, noise, 1.0, 1.0, pmax, 0.9 * capacity);
  const auto pr2 = prepare(ok, PowerAllocation(Eigen::MatrixXd::Constant(1, 1, pmax)));
  const ConvexSubproblem sub2(pr2.model, Scalarization::weighted_product(1.0));
  Eigen::VectorXd c;
  sub2.constraints(start_for(sub2, pr2), c, nullptr);
  CHECK(c.minCoeff() > 0.0);
}

TEST_CASE("instance I1: surrogate optimum matches a 1-D grid oracle") {
  const auto inst = eeopt::testing::single_user(1.0, 10.0, 1.0, 1.0, 1.0, 10.0);
  const auto pr = prepare(inst, PowerAllocation(Eigen::MatrixXd::Ones(1, 1)));
  const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(1.0));
  const BarrierSettings settings;
  const SubproblemSolution sol = solve(sub, start_for(sub, pr, settings), settings);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.kkt_residual <= 1e-8);

  // Oracle: g~(q, u) = R~(q) - 2^u (2^q + 1), root in u by bisection.
  const double gp = 10.0;  // expansion SINR at p = 1
  const double a = gp / (1 + gp), b = std::log2(1 + gp) - a * std::log2(gp);
  double best = -INFINITY, best_q = 0.0;
  const double lo = std::log2(1e-6), hi = std::log2(10.0);
  const long steps = static_cast<long>((hi - lo) / 1e-5);
  for (long s = 0; s <= steps; ++s) {
    const double q = lo + s * 1e-5;
    const double rate = b + a * (std::log2(10.0) + q);
    if (rate < 0.0) continue;
    // Coarse bracket from the closed form, refined by bisection.
    const double guess = std::log2(rate / (std::exp2(q) + 1.0));
    const double u = decreasing_root(
        [&](double uu) { return rate - std::exp2(uu) * (std::exp2(q) + 1.0); },
        guess - 1.0, guess + 1.0);
    if (u > best) {
      best = u;
      best_q = q;
    }
  }
  CHECK(sol.u == doctest::Approx(best).epsilon(1e-8));
  CHECK(sol.q(0, 0) == doctest::Approx(best_q).epsilon(1e-3));
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("subproblem optimum dominates a 2-D grid on small instances") {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + t % 2;
    const auto inst = eeopt::testing::random_instance(rng, n, 1);
    const auto p = eeopt::testing::random_allocation(rng, inst);
    const auto pr = prepare(inst, p);
    const double w = (t % 3) * 0.5;
    const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(w));
    const BarrierSettings settings;
    const SubproblemSolution sol = solve(sub, start_for(sub, pr, settings), settings);
    REQUIRE(sol.status == SolveStatus::Optimal);

    const Minorant m(inst, pr.q0.col(0));
    const int grid = n == 1 ? 4000 : 300;
    double best = -INFINITY;
    Eigen::VectorXd q(n);
    const auto visit = [&] {
      double tot_r = 0.0, tot_p = 0.0, v = INFINITY;
      for (int i = 0; i < n; ++i) {
        const double r = m.rate(q, i);
        if (r <= 0.0) return;
        tot_r += r;
        tot_p += m.power(q, i);
        v = std::min(v, std::log2(r / m.power(q, i)));
      }
      const double u = std::log2(tot_r / tot_p);
      best = std::max(best, w * u + (1 - w) * v);
    };
    const auto axis = [&](int i, int s) {
      const double hi = std::log2(inst.max_power(i));
      return hi - 30.0 + 30.0 * s / grid;
    };
    for (int s0 = 0; s0 <= grid; ++s0) {
      q(0) = axis(0, s0);
      if (n == 1) {
        visit();
        continue;
      }
      for (int s1 = 0; s1 <= grid; ++s1) {
        q(1) = axis(1, s1);
        visit();
      }
    }
    CHECK(sol.objective >= best - 1e-4 * std::abs(best));
    ++checked;
  }
  CHECK(checked == 12);
}

TEST_CASE("weighted minimum on a symmetric pair balances u and v") {
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.05, 0.05, 1.0;
  const auto inst = eeopt::testing::flat_instance(1.0, g, 1, vec({0.1, 0.1}), vec({1, 1}),
                                                  vec({0.5, 0.5}), vec({4, 4}), vec({0, 0}));
  const auto pr = prepare(inst, PowerAllocation(Eigen::MatrixXd::Constant(2, 1, 1.0)));
  const ConvexSubproblem sub(pr.model, Scalarization::weighted_minimum(0.5));
  const BarrierSettings settings;
  const SubproblemSolution sol = solve(sub, start_for(sub, pr, settings), settings);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::abs(sol.u - sol.v) <= 1e-6);
  CHECK(std::abs(sol.q(0, 0) - sol.q(1, 0)) <= 1e-4);

  // Grid oracle over (q1, q2) with u, v from bisection on the minorants.
  const Minorant m(inst, pr.q0.col(0));
  double best = -INFINITY;
  Eigen::VectorXd q(2);
  const int grid = 400;
  for (int s0 = 0; s0 <= grid; ++s0) {
    for (int s1 = 0; s1 <= grid; ++s1) {
      q << 2.0 - 12.0 + 12.0 * s0 / grid, 2.0 - 12.0 + 12.0 * s1 / grid;
      const double r0 = m.rate(q, 0), r1 = m.rate(q, 1);
      if (r0 <= 0.0 || r1 <= 0.0) continue;
      const double p0 = m.power(q, 0), p1 = m.power(q, 1);
      const double u = decreasing_root(
          [&](double x) { return r0 + r1 - std::exp2(x) * (p0 + p1); }, -60.0, 60.0);
      const double v = std::min(
          decreasing_root([&](double x) { return r0 - std::exp2(x) * p0; }, -60.0, 60.0),
          decreasing_root([&](double x) { return r1 - std::exp2(x) * p1; }, -60.0, 60.0));
      best = std::max(best, std::min(u + 1.0, v + 1.0));
    }
  }
  CHECK(sol.objective >= best - 1e-4 * std::abs(best));
  CHECK(sol.objective <= best + 1e-3 * std::abs(best));
}

TEST_CASE("subproblem solve never falls below its start and is deterministic") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto inst = eeopt::testing::random_instance(rng, 2 + t % 3, 1 + t % 2);
    const auto pr = prepare(inst, eeopt::testing::random_allocation(rng, inst));
    const ConvexSubproblem sub(pr.model, Scalarization::weighted_product(0.1 * t));
    const BarrierSettings settings;
    const Eigen::VectorXd x0 = start_for(sub, pr, settings);
    const SubproblemSolution a = solve(sub, x0, settings);
    const SubproblemSolution b = solve(sub, x0, settings);
    CHECK(a.objective >= sub.objective().dot(x0) - 1e-9);
    CHECK((a.x.array() == b.x.array()).all());
    CHECK(a.status == SolveStatus::Optimal);
    CHECK(a.kkt_residual <= settings.kkt_tolerance);
  }
}
