#include "stabex/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stabex::problems {

namespace {

OdeProblem linear_problem(Matrix a, Vector u0, double final_time, std::optional<double> hint) {
  OdeProblem p;
  p.dimension = static_cast<std::size_t>(u0.size());
  p.rhs = [a](const Vector& u, double) -> Vector { return -(a * u); };
  p.jacobian = [a](const Vector&, double) -> Matrix { return -a; };
  p.initial = std::move(u0);
  p.final_time = final_time;
  p.spectral_hint = hint;
  return p;
}

int heat_intervals(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("heat_equation: h must be > 0");
  const double n = 1.0 / h;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * n || rounded < 3)
    throw std::invalid_argument("heat_equation: h must divide [0, 1] into at least 3 intervals");
  return static_cast<int>(rounded);
}

}  // namespace

BenchmarkProblem test_equation() {
  constexpr double lambda = 1000.0;
  BenchmarkProblem b;
  b.name = "test-eq";
  Matrix a(1, 1);
  a(0, 0) = lambda;
  b.problem = linear_problem(a, Vector::Ones(1), 10.0, lambda);
  b.analytic = [](double t) -> Vector { return Vector::Constant(1, std::exp(-lambda * t)); };
  b.paper_cost_ratio = 1.0 / 310.0;
  return b;
}

BenchmarkProblem test_system() {
  BenchmarkProblem b;
  b.name = "test-sys";
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 100.0;
  a(1, 1) = 1000.0;
  b.problem = linear_problem(a, Vector::Ones(2), 10.0, 1000.0);
  b.analytic = [](double t) -> Vector {
    Vector u(2);
    u << std::exp(-100.0 * t), std::exp(-1000.0 * t);
    return u;
  };
  b.paper_cost_ratio = 1.0 / 104.0;
  return b;
}

BenchmarkProblem nonnormal_system() {
  BenchmarkProblem b;
  b.name = "nonnormal";
  Matrix a(2, 2);
  a << 1000.0, -10000.0, 0.0, 100.0;
  b.problem = linear_problem(a, Vector::Ones(2), 10.0, 1000.0);
  // u2 = e^{-100t}; u1 = c1 e^{-1000t} + c2 e^{-100t} with 900 c2 = 10000.
  b.analytic = [](double t) -> Vector {
    constexpr double c2 = 100.0 / 9.0;
    constexpr double c1 = 1.0 - c2;
    const double slow = std::exp(-100.0 * t);
    Vector u(2);
    u << c1 * std::exp(-1000.0 * t) + c2 * slow, slow;
    return u;
  };
  b.paper_cost_ratio = 1.0 / 180.0;
  return b;
}

BenchmarkProblem hires() {
  BenchmarkProblem b;
  b.name = "hires";
  OdeProblem& p = b.problem;
  p.dimension = 8;
  p.rhs = [](const Vector& u, double) -> Vector {
    Vector f(8);
    const double reaction = 280.0 * u[5] * u[7];
    f[0] = -1.71 * u[0] + 0.43 * u[1] + 8.32 * u[2] + 0.0007;
    f[1] = 1.71 * u[0] - 8.75 * u[1];
    f[2] = -10.03 * u[2] + 0.43 * u[3] + 0.035 * u[4];
    f[3] = 8.32 * u[1] + 1.71 * u[2] - 1.12 * u[3];
    f[4] = -1.745 * u[4] + 0.43 * u[5] + 0.43 * u[6];
    f[5] = -reaction + 0.69 * u[3] + 1.71 * u[4] - 0.43 * u[5] + 0.69 * u[6];
    f[6] = reaction - 1.81 * u[6];
    f[7] = -reaction + 1.81 * u[6];
    return f;
  };
  p.jacobian = [](const Vector& u, double) -> Matrix {
    Matrix j = Matrix::Zero(8, 8);
    j(0, 0) = -1.71, j(0, 1) = 0.43, j(0, 2) = 8.32;
    j(1, 0) = 1.71, j(1, 1) = -8.75;
    j(2, 2) = -10.03, j(2, 3) = 0.43, j(2, 4) = 0.035;
    j(3, 1) = 8.32, j(3, 2) = 1.71, j(3, 3) = -1.12;
    j(4, 4) = -1.745, j(4, 5) = 0.43, j(4, 6) = 0.43;
    j(5, 3) = 0.69, j(5, 4) = 1.71, j(5, 5) = -280.0 * u[7] - 0.43, j(5, 6) = 0.69,
    j(5, 7) = -280.0 * u[5];
    j(6, 5) = 280.0 * u[7], j(6, 6) = -1.81, j(6, 7) = 280.0 * u[5];
    j(7, 5) = -280.0 * u[7], j(7, 6) = 1.81, j(7, 7) = -280.0 * u[5];
    return j;
  };
  p.initial = Vector::Zero(8);
  p.initial[0] = 1.0;
  p.initial[7] = 0.0057;
  p.final_time = 321.8122;
  b.paper_cost_ratio = 1.0 / 33.0;
  return b;
}

BenchmarkProblem akzo_nobel() {
  // Reaction rates r1..r5 and the feed F; f = C r + F e2.
  static const Matrix stoichiometry = [] {
    Matrix c(6, 5);
    c << -2.0, 1.0, -1.0, -1.0, 0.0,   //
        -0.5, 0.0, 0.0, -1.0, -0.5,    //
        1.0, -1.0, 1.0, 0.0, 0.0,      //
        0.0, -1.0, 1.0, -2.0, 0.0,     //
        0.0, 1.0, -1.0, 0.0, 1.0,      //
        0.0, 0.0, 0.0, 0.0, -1.0;
    return c;
  }();
  constexpr double k1 = 18.7, k2 = 0.58, k3 = 0.58 / 34.4, k4 = 0.09, k5 = 0.42;
  constexpr double feed_rate = 3.3, feed_level = 0.9 / 737.0;

  BenchmarkProblem b;
  b.name = "akzo";
  OdeProblem& p = b.problem;
  p.dimension = 6;
  p.rhs = [](const Vector& u, double) -> Vector {
    const double s = std::sqrt(std::max(u[1], 0.0));
    Vector r(5);
    r << k1 * std::pow(u[0], 4) * s, k2 * u[2] * u[3], k3 * u[0] * u[4], k4 * u[0] * u[3] * u[3],
        k5 * u[5] * u[5] * s;
    Vector f = stoichiometry * r;
    f[1] += feed_rate * (feed_level - u[1]);
    return f;
  };
  p.jacobian = [](const Vector& u, double) -> Matrix {
    const double s = std::sqrt(std::max(u[1], 0.0));
    const double ds = s > 0.0 ? 0.5 / s : 0.0;  // d sqrt(u2) / d u2
    Matrix dr = Matrix::Zero(5, 6);
    dr(0, 0) = 4.0 * k1 * std::pow(u[0], 3) * s;
    dr(0, 1) = k1 * std::pow(u[0], 4) * ds;
    dr(1, 2) = k2 * u[3];
    dr(1, 3) = k2 * u[2];
    dr(2, 0) = k3 * u[4];
    dr(2, 4) = k3 * u[0];
    dr(3, 0) = k4 * u[3] * u[3];
    dr(3, 3) = 2.0 * k4 * u[0] * u[3];
    dr(4, 1) = k5 * u[5] * u[5] * ds;
    dr(4, 5) = 2.0 * k5 * u[5] * s;
    Matrix j = stoichiometry * dr;
    j(1, 1) -= feed_rate;
    return j;
  };
  p.initial = Vector::Zero(6);
  p.initial << 0.437, 0.00123, 0.0, 0.0, 0.0, 0.367;
  p.final_time = 180.0;
  b.paper_cost_ratio = 1.0 / 9.0;
  return b;
}

BenchmarkProblem van_der_pol(double mu) {
  BenchmarkProblem b;
  b.name = "vdp";
  OdeProblem& p = b.problem;
  p.dimension = 2;
  p.rhs = [mu](const Vector& u, double) -> Vector {
    Vector f(2);
    f << u[1], -mu * (u[0] * u[0] - 1.0) * u[1] - u[0];
    return f;
  };
  p.jacobian = [mu](const Vector& u, double) -> Matrix {
    Matrix j(2, 2);
    j << 0.0, 1.0, -2.0 * mu * u[0] * u[1] - 1.0, -mu * (u[0] * u[0] - 1.0);
    return j;
  };
  p.initial = Vector(2);
  p.initial << 2.0, 0.0;
  p.final_time = 10.0;
  b.paper_cost_ratio = 1.0 / 75.0;
  return b;
}

Matrix heat_stiffness_matrix(double h) {
  const int n = heat_intervals(h) - 1;
  const double scale = 1.0 / (h * h);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0 * scale;
    if (i > 0) a(i, i - 1) = -scale;
    if (i + 1 < n) a(i, i + 1) = -scale;
  }
  return a;
}

Vector heat_forcing(double h) {
  const int intervals = heat_intervals(h);
  Vector g = Vector::Zero(intervals - 1);
  // Node i sits at x = i h, i = 1..N; pick the one nearest 0.5.
  const int node = std::clamp(static_cast<int>(std::lround(0.5 * intervals)), 1, intervals - 1);
  g[node - 1] = 1.0 / h;
  return g;
}

double heat_eigenvalue(double h, int j) {
  const double s = std::sin(j * std::numbers::pi * h / 2.0);
  return 4.0 / (h * h) * s * s;
}

Vector heat_steady_state(double h) {
  const int n = heat_intervals(h) - 1;
  const Vector g = heat_forcing(h);
  // Thomas algorithm on (1/h^2) tridiag(-1, 2, -1) u = g.
  const double off = -1.0 / (h * h);
  const double diag = 2.0 / (h * h);
  std::vector<double> c(static_cast<std::size_t>(n));
  std::vector<double> d(static_cast<std::size_t>(n));
  c[0] = off / diag;
  d[0] = g[0] / diag;
  for (int i = 1; i < n; ++i) {
    const double denom = diag - off * c[i - 1];
    c[i] = off / denom;
    d[i] = (g[i] - off * d[i - 1]) / denom;
  }
  Vector u(n);
  u[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) u[i] = d[i] - c[i] * u[i + 1];
  return u;
}

BenchmarkProblem heat_equation(double h) {
  const int intervals = heat_intervals(h);
  const int n = intervals - 1;
  const double scale = 1.0 / (h * h);
  const Vector g = heat_forcing(h);

  BenchmarkProblem b;
  b.name = "heat";
  OdeProblem& p = b.problem;
  p.dimension = static_cast<std::size_t>(n);
  p.rhs = [n, scale, g](const Vector& u, double) -> Vector {
    Vector f(n);
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < n ? u[i + 1] : 0.0;
      f[i] = g[i] - scale * (2.0 * u[i] - left - right);
    }
    return f;
  };
  const Matrix a = heat_stiffness_matrix(h);
  p.jacobian = [a](const Vector&, double) -> Matrix { return -a; };
  p.initial = Vector::Zero(n);
  p.final_time = kHeatFinalTime;
  p.spectral_hint = heat_eigenvalue(h, n);

  // Expand in the orthonormal sine eigenvectors v_j(x_i) = sqrt(2h) sin(j pi x_i):
  // u(t) = sum_j (1 - e^{-lambda_j t}) / lambda_j (v_j . g) v_j.
  Matrix modes(n, n);
  Vector lambdas(n);
  for (int j = 1; j <= n; ++j) {
    lambdas[j - 1] = heat_eigenvalue(h, j);
    for (int i = 1; i <= n; ++i)
      modes(i - 1, j - 1) = std::sqrt(2.0 * h) * std::sin(j * std::numbers::pi * i * h);
  }
  const Vector weights = modes.transpose() * g;
  b.analytic = [modes, lambdas, weights](double t) -> Vector {
    Vector coeff(lambdas.size());
    for (Eigen::Index j = 0; j < lambdas.size(); ++j)
      coeff[j] = -std::expm1(-lambdas[j] * t) / lambdas[j] * weights[j];
    return modes * coeff;
  };
  b.paper_cost_ratio = 1.0 / 31.0;
  return b;
}

BenchmarkProblem nonstiff_oscillator() {
  BenchmarkProblem b;
  b.name = "nonstiff";
  Matrix a(2, 2);
  a << 0.0, -5.0, 1.0, 0.0;
  b.problem = linear_problem(a, Vector(2), 10.0, std::sqrt(5.0));
  b.problem.initial << 0.0, 1.0;
  b.analytic = [](double t) -> Vector {
    const double w = std::sqrt(5.0);
    Vector u(2);
    u << w * std::sin(w * t), std::cos(w * t);
    return u;
  };
  b.paper_cost_ratio = 1.0;
  return b;
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"test-eq", "test-sys", "nonnormal", "hires",
                                              "akzo",    "vdp",      "heat",      "nonstiff"};
  return names;
}

BenchmarkProblem make_benchmark(const std::string& name) {
  if (name == "test-eq") return test_equation();
  if (name == "test-sys") return test_system();
  if (name == "nonnormal") return nonnormal_system();
  if (name == "hires") return hires();
  if (name == "akzo") return akzo_nobel();
  if (name == "vdp") return van_der_pol();
  if (name == "heat") return heat_equation();
  if (name == "nonstiff") return nonstiff_oscillator();
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace stabex::problems
