#pragma once

// The benchmark problems: linear test problems, HIRES, a version of the
// Akzo-Nobel chemistry problem, Van der Pol, a discretized heat equation and
// a nonstiff oscillator. Parameters are fixed to the published setup.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stabex/ode.hpp"

namespace stabex::problems {

using AnalyticSolution = std::function<Vector(double)>;

struct BenchmarkProblem {
  std::string name;
  OdeProblem problem;
  AnalyticSolution analytic;                // may be empty
  std::optional<double> paper_cost_ratio;  // published alpha / alpha0

  [[nodiscard]] bool has_analytic() const { return static_cast<bool>(analytic); }
};

/// u' = -1000 u, u(0) = 1 on [0, 10].
BenchmarkProblem test_equation();

/// u' = -diag(100, 1000) u, u(0) = (1, 1) on [0, 10].
BenchmarkProblem test_system();

/// u' = -A u with A = [[1000, -10000], [0, 100]], u(0) = (1, 1) on [0, 10].
BenchmarkProblem nonnormal_system();

/// HIRES (8 components) on [0, 321.8122].
BenchmarkProblem hires();

/// Akzo-Nobel variant (6 components) on [0, 180]. sqrt(u2) is evaluated as
/// sqrt(max(u2, 0)).
BenchmarkProblem akzo_nobel();

/// Van der Pol with mu = 1000, u(0) = (2, 0) on [0, 10].
BenchmarkProblem van_der_pol(double mu = 1000.0);

/// u' + A u = f on [0, 1] for the 1D Laplacian with homogeneous Dirichlet
/// data, N = 1/h - 1 interior nodes, and f the discrete delta with value 1/h
/// at the node nearest x = 0.5. The semi-discrete solution is exact (sine
/// eigenvectors).
BenchmarkProblem heat_equation(double h = 0.01);

/// u1' = 5 u2, u2' = -u1, u(0) = (0, 1) on [0, 10].
BenchmarkProblem nonstiff_oscillator();

/// Final time used for the heat equation; long enough for the slowest mode
/// (lambda ~ pi^2) to reach steady state to within 1e-4.
inline constexpr double kHeatFinalTime = 1.0;

// Heat-equation helpers.
Matrix heat_stiffness_matrix(double h);
Vector heat_forcing(double h);
double heat_eigenvalue(double h, int j);  // (4/h^2) sin^2(j pi h / 2), j = 1..N
/// Steady state A^{-1} f by the tridiagonal (Thomas) solve.
Vector heat_steady_state(double h);

/// CLI names: test-eq, test-sys, nonnormal, hires, akzo, vdp, heat, nonstiff.
const std::vector<std::string>& benchmark_names();

/// Throws std::invalid_argument for an unknown name.
BenchmarkProblem make_benchmark(const std::string& name);

}  // namespace stabex::problems
