#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stabex/problems.hpp"
#include "stabex/solver.hpp"

using namespace stabex;
using namespace stabex::solver;

namespace {

OdeProblem linear(const Matrix& a, const Vector& u0) {
  OdeProblem p;
  p.dimension = static_cast<std::size_t>(a.rows());
  p.rhs = [a](const Vector& u, double) -> Vector { return -a * u; };
  p.initial = u0;
  p.final_time = 1.0;
  return p;
}

OdeProblem scalar(double lambda) {
  Matrix a(1, 1);
  a(0, 0) = lambda;
  return linear(a, Vector::Ones(1));
}

OdeProblem zero_rhs() {
  OdeProblem p;
  p.dimension = 2;
  p.rhs = [](const Vector& u, double) -> Vector { return Vector::Zero(u.size()); };
  p.initial = Vector::Ones(2);
  p.final_time = 1.0;
  return p;
}

}  // namespace

TEST_CASE("explicit Euler step") {
  const auto p = scalar(1000.0);
  const Vector one = Vector::Ones(1);
  CHECK(explicit_euler_step(one, 0.0, 0.001, p)[0] == doctest::Approx(0.0));
  CHECK(explicit_euler_step(one, 0.0, 0.0005, p)[0] == doctest::Approx(0.5));
  CHECK(explicit_euler_step(one, 0.0, 0.0, p)[0] == 1.0);

  // Local error O(k^2): halving the step divides it by about 4.
  const auto osc = problems::nonstiff_oscillator();
  const auto err = [&](double k) {
    return max_norm(explicit_euler_step(osc.problem.initial, 0.0, k, osc.problem) - osc.analytic(k));
  };
  const double ratio = err(1e-3) / err(5e-4);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("cG(1) fixed point on the test equation") {
  const auto p = scalar(1000.0);
  const Vector one = Vector::Ones(1);

  const auto ok = cg1_fixed_point_step(one, 0.0, 0.001, p, {1e-10, 100, 0});
  REQUIRE(ok.converged());
  CHECK(ok.final_state[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

  const auto bad = cg1_fixed_point_step(one, 0.0, 0.01, p, {1e-10, 6, 0, 0.0});
  CHECK_FALSE(bad.converged());
  REQUIRE(bad.residual_norms.size() == 6);
  for (std::size_t l = 1; l < bad.residual_norms.size(); ++l)
    CHECK(bad.residual_norms[l] / bad.residual_norms[l - 1] == doctest::Approx(5.0).epsilon(1e-12));

  // Default options stop after two consecutive growths.
  const auto early = cg1_fixed_point_step(one, 0.0, 0.01, p, {1e-3, 10});
  CHECK(early.status == FixedPointStatus::diverged);
  CHECK(early.residual_norms.size() == 3);

  const auto z = cg1_fixed_point_step(Vector::Ones(2), 0.0, 0.1, zero_rhs(), {1e-12, 10});
  CHECK(z.converged());
  CHECK(z.iterations == 1);
  CHECK(z.residual_norms.front() == 0.0);
  CHECK(z.final_state == Vector::Ones(2));
}

TEST_CASE("convergence threshold is k lambda / 2 = 1") {
  const auto p = scalar(1000.0);
  const Vector one = Vector::Ones(1);
  const FixedPointOptions opts{1e-8, 500};
  CHECK(cg1_fixed_point_step(one, 0.0, 1.8e-3, p, opts).converged());
  CHECK(cg1_fixed_point_step(one, 0.0, 2.2e-3, p, opts).status == FixedPointStatus::diverged);
}

TEST_CASE("contraction identity r^l = -(k/2) A r^(l-1)") {
  Matrix a(2, 2);
  a << 100.0, 0.0, 0.0, 1000.0;
  const auto p = linear(a, Vector::Ones(2));
  const double k = 0.01;
  Vector prev = p.initial;
  Vector r_prev;
  for (int l = 1; l <= 6; ++l) {
    const Vector next = p.initial + k * p.rhs(0.5 * (p.initial + prev), 0.0);
    const Vector r = discrete_residual(p.initial, next, 0.0, k, p);
    if (l > 1) {
      const Vector expected = -(k / 2.0) * a * r_prev;
      CHECK(max_norm(r - expected) <= 1e-10 * max_norm(expected));
    }
    r_prev = r;
    prev = next;
  }

  Matrix nn(2, 2);
  nn << 1000.0, -10000.0, 0.0, 100.0;
  const auto q = linear(nn, Vector::Ones(2));
  Vector it = q.initial;
  Vector rq_prev;
  for (int l = 1; l <= 5; ++l) {
    const Vector next = q.initial + k * q.rhs(0.5 * (q.initial + it), 0.0);
    const Vector r = discrete_residual(q.initial, next, 0.0, k, q);
    if (l > 1) {
      const Vector expected = -(k / 2.0) * nn * rq_prev;
      CHECK(max_norm(r - expected) <= 1e-10 * max_norm(expected));
    }
    rq_prev = r;
    it = next;
  }
}

TEST_CASE("discrete residual") {
  const auto p = scalar(1000.0);
  const Vector one = Vector::Ones(1);
  CHECK(discrete_residual(one, one, 0.0, 0.001, p)[0] == doctest::Approx(1000.0));
  Vector exact(1);
  exact[0] = 1.0 / 3.0;  // midpoint rule with k lambda = 1
  CHECK(std::abs(discrete_residual(one, exact, 0.0, 0.001, p)[0]) < 1e-10);
}

TEST_CASE("continuous residual") {
  OdeProblem constant;
  constant.dimension = 1;
  constant.rhs = [](const Vector&, double) -> Vector { return Vector::Constant(1, 2.0); };
  constant.initial = Vector::Zero(1);
  constant.final_time = 1.0;
  Vector u1(1);
  u1[0] = 0.2;
  CHECK(continuous_residual(constant.initial, u1, 0.1, 0.1, constant) == doctest::Approx(0.0));
  CHECK(continuous_residual(Vector::Ones(2), Vector::Ones(2), 0.1, 0.1, zero_rhs()) == 0.0);

  // A converged midpoint step leaves a nonzero endpoint residual.
  const auto p = scalar(1000.0);
  const double k = 0.001;
  const double u_new = 1.0 / 3.0;
  const double expected = std::abs((u_new - 1.0) / k + 1000.0 * u_new);
  Vector un(1);
  un[0] = u_new;
  CHECK(continuous_residual(Vector::Ones(1), un, k, k, p) == doctest::Approx(expected));
  CHECK(expected > 0.0);
}

TEST_CASE("divergence rate") {
  CHECK(*divergence_rate({1.0, 5.0}, 0.01) == doctest::Approx(1000.0));
  CHECK(*divergence_rate({1.0, 1.0}, 0.01) == doctest::Approx(200.0));
  CHECK_FALSE(divergence_rate({1.0}, 0.01));
  CHECK_FALSE(divergence_rate({0.0, 1.0}, 0.01));
  // Four norms: geometric mean of the last two ratios.
  CHECK(*divergence_rate({1.0, 2.0, 6.0, 24.0}, 1.0) == doctest::Approx(2.0 * std::sqrt(12.0)));

  Matrix a(2, 2);
  a << 100.0, 0.0, 0.0, 1000.0;
  const auto p = linear(a, Vector::Ones(2));
  const auto out = cg1_fixed_point_step(p.initial, 0.0, 0.01, p, {1e-12, 8, 0, 0.0});
  CHECK(*divergence_rate(out.residual_norms, 0.01) == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("cG(1) preserves the oscillator invariant to O(k^2)") {
  const auto osc = problems::nonstiff_oscillator();
  const auto drift = [&](double k) {
    Vector u = osc.problem.initial;
    double t = 0.0;
    for (int n = 0; n < static_cast<int>(std::lround(1.0 / k)); ++n) {
      u = cg1_fixed_point_step(u, t, k, osc.problem, {1e-14, 100, 0}).final_state;
      t += k;
    }
    return std::abs(u[0] * u[0] / 5.0 + u[1] * u[1] - 1.0);
  };
  // The midpoint rule conserves quadratic invariants, so only iteration error remains.
  CHECK(drift(0.01) < 1e-10);
  CHECK(drift(0.005) < 1e-10);
}
