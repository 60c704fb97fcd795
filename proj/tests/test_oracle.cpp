#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stabex/oracle.hpp"
#include "stabex/problems.hpp"

using namespace stabex;
using namespace stabex::oracle;

TEST_CASE("reference solutions") {
  const auto eq = problems::test_equation();
  const auto a = reference_solve(eq.problem, {0.001}, eq.analytic);
  CHECK(a.method == "analytic");
  CHECK(a.at_final()[0] == doctest::Approx(std::exp(-1.0)));

  // Numerical path on the same problem (no analytic solution passed).
  const auto n = reference_solve(eq.problem, {0.0, 0.005});
  CHECK(n.method == "rk4");
  CHECK(n.step * 1000.0 <= 0.2);
  CHECK(n.at_final()[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-6));

  const auto osc = problems::nonstiff_oscillator();
  const double t = std::numbers::pi / std::sqrt(5.0);
  const auto o = reference_solve(osc.problem, {t}, osc.analytic);
  CHECK(std::abs(o.at_final()[0]) < 1e-12);
  CHECK(o.at_final()[1] == doctest::Approx(-1.0));

  OdeProblem zero;
  zero.dimension = 2;
  zero.rhs = [](const Vector& u, double) -> Vector { return Vector::Zero(u.size()); };
  zero.initial = Vector::Constant(2, 3.0);
  zero.final_time = 1.0;
  const auto z = reference_solve(zero, {0.5, 1.0});
  CHECK(max_norm(z.at_final() - zero.initial) == 0.0);

  CHECK_THROWS(reference_solve(eq.problem, {0.2, 0.1}));
  CHECK_THROWS(reference_solve(eq.problem, {}));
}

TEST_CASE("RK4 is fourth order") {
  const auto osc = problems::nonstiff_oscillator();
  const auto err = [&](double k) {
    return max_norm(rk4_fixed(osc.problem, {1.0}, k).at_final() - osc.analytic(1.0));
  };
  CHECK(err(0.02) / err(0.01) == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("finite-difference Jacobian") {
  const auto sys = problems::test_system();
  Matrix a(2, 2);
  a << 100.0, 0.0, 0.0, 1000.0;
  CHECK((finite_difference_jacobian(sys.problem, sys.problem.initial, 0.0) + a).cwiseAbs().maxCoeff() < 1e-6);

  const auto vdp = problems::van_der_pol();
  Matrix j(2, 2);
  j << 0.0, 1.0, -1.0, -3000.0;
  const Matrix fd = finite_difference_jacobian(vdp.problem, vdp.problem.initial, 0.0);
  CHECK((fd - j).cwiseAbs().maxCoeff() <= 1e-4 * 3000.0);

  OdeProblem c;
  c.dimension = 2;
  c.rhs = [](const Vector&, double) -> Vector { return Vector::Constant(2, 4.0); };
  c.initial = Vector::Zero(2);
  c.final_time = 1.0;
  CHECK(finite_difference_jacobian(c, c.initial, 0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("power iteration") {
  Matrix d(2, 2);
  d << 100.0, 0.0, 0.0, 1000.0;
  CHECK(power_iteration_lambda_max(d) == doctest::Approx(1000.0).epsilon(1e-9));

  Matrix nn(2, 2);
  nn << 1000.0, -10000.0, 0.0, 100.0;
  CHECK(power_iteration_lambda_max(nn) == doctest::Approx(1000.0).epsilon(1e-6));

  // Close top pair: the cap is reached but the estimate is still accurate.
  const Matrix heat = problems::heat_stiffness_matrix(0.01);
  CHECK(power_iteration_lambda_max(heat) ==
        doctest::Approx(problems::heat_eigenvalue(0.01, 99)).epsilon(1e-3));

  // Rotation: complex pair of modulus 2, reported by the two-step estimate.
  Matrix rot(2, 2);
  rot << 0.0, -2.0, 2.0, 0.0;
  CHECK(power_iteration_lambda_max(rot) == doctest::Approx(2.0).epsilon(1e-9));

  const auto vdp = problems::van_der_pol();
  CHECK(lambda_max_along(vdp.problem, {0.0}, {vdp.problem.initial}) ==
        doctest::Approx(3000.0).epsilon(1e-3));
}

TEST_CASE("scan_max_abs") {
  CHECK(scan_max_abs([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1000) ==
        doctest::Approx(1.0).epsilon(1e-6));
  // Log-spaced points catch a spike next to the left end.
  CHECK(scan_max_abs([](double x) { return (x > 1e-8 && x < 1e-7) ? 5.0 : 0.0; }, 0.0, 1.0, 100) == 5.0);
}
