#include "stabex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace stabex::oracle {

namespace {

constexpr double kStepFactor = 0.1;
constexpr std::size_t kReestimateEvery = 2000;

void check_samples(const OdeProblem& problem, const std::vector<double>& samples) {
  if (samples.empty()) throw std::invalid_argument("reference_solve: no sample times");
  if (!std::is_sorted(samples.begin(), samples.end()))
    throw std::invalid_argument("reference_solve: sample times must be ascending");
  if (samples.front() < 0.0 || samples.back() > problem.final_time * (1.0 + 1e-12))
    throw std::invalid_argument("reference_solve: sample time outside [0, T]");
}

Vector rk4_step(const OdeProblem& problem, const Vector& u, double t, double k) {
  const Vector k1 = problem.rhs(u, t);
  const Vector k2 = problem.rhs(u + 0.5 * k * k1, t + 0.5 * k);
  const Vector k3 = problem.rhs(u + 0.5 * k * k2, t + 0.5 * k);
  const Vector k4 = problem.rhs(u + k * k3, t + k);
  return u + (k / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double jacobian_lambda(const OdeProblem& problem, const Vector& u, double t) {
  const Matrix j = problem.has_jacobian() ? problem.jacobian(u, t)
                                          : finite_difference_jacobian(problem, u, t);
  return power_iteration_lambda_max(j);
}

// Integrates from (t, u) through every sample, landing on each exactly.
// step_for(t, u) may shrink the step; it is consulted every kReestimateEvery steps.
template <typename StepPolicy>
ReferenceSolution integrate(const OdeProblem& problem, const std::vector<double>& samples,
                            double step, StepPolicy&& step_for, std::size_t max_steps) {
  ReferenceSolution out;
  out.method = "rk4";
  double t = 0.0;
  Vector u = problem.initial;
  double k = step;
  std::size_t steps = 0;
  for (double target : samples) {
    while (target - t > 1e-14 * std::max(1.0, target)) {
      if (steps % kReestimateEvery == 0) k = std::min(k, step_for(t, u));
      const double h = std::min(k, target - t);
      u = rk4_step(problem, u, t, h);
      t += h;
      if (!all_finite(u)) throw OracleFailure("reference_solve: RK4 state became nonfinite");
      if (++steps > max_steps) throw OracleFailure("reference_solve: step budget exhausted");
    }
    t = target;
    out.times.push_back(target);
    out.states.push_back(u);
  }
  out.step = k;
  return out;
}

}  // namespace

ReferenceSolution reference_solve(const OdeProblem& problem, const std::vector<double>& samples,
                                  const std::function<Vector(double)>& analytic,
                                  std::size_t max_steps) {
  problem.validate();
  check_samples(problem, samples);

  if (analytic) {
    ReferenceSolution out;
    out.method = "analytic";
    for (double t : samples) {
      out.times.push_back(t);
      out.states.push_back(analytic(t));
    }
    return out;
  }

  const double floor = 1e-8 * problem.final_time;
  if (problem.spectral_hint) {
    const double k = std::max(kStepFactor / *problem.spectral_hint, floor);
    return integrate(problem, samples, k, [k](double, const Vector&) { return k; }, max_steps);
  }
  auto policy = [&problem, floor](double t, const Vector& u) {
    const double lambda = jacobian_lambda(problem, u, t);
    return lambda > 0.0 ? std::max(kStepFactor / lambda, floor) : problem.final_time;
  };
  const double k0 = std::min(policy(0.0, problem.initial), problem.final_time / 1000.0);
  return integrate(problem, samples, k0, policy, max_steps);
}

ReferenceSolution rk4_fixed(const OdeProblem& problem, const std::vector<double>& samples,
                            double step) {
  problem.validate();
  check_samples(problem, samples);
  if (!(step > 0.0)) throw std::invalid_argument("rk4_fixed: step must be > 0");
  return integrate(problem, samples, step, [step](double, const Vector&) { return step; },
                   std::numeric_limits<std::size_t>::max());
}

Matrix finite_difference_jacobian(const OdeProblem& problem, const Vector& u, double t) {
  const Eigen::Index n = u.size();
  Matrix j(n, n);
  Vector probe = u;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double delta = std::max(1e-7, 1e-7 * std::abs(u[i]));
    probe[i] = u[i] + delta;
    const Vector plus = problem.rhs(probe, t);
    probe[i] = u[i] - delta;
    const Vector minus = problem.rhs(probe, t);
    probe[i] = u[i];
    j.col(i) = (plus - minus) / (2.0 * delta);
  }
  return j;
}

PowerIterationResult power_iteration(const MatrixAction& action, std::size_t dimension,
                                     int max_iter) {
  PowerIterationResult result;
  if (dimension == 0) return result;

  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector v(static_cast<Eigen::Index>(dimension));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) * dist(rng);
  v.normalize();

  constexpr double rel_tol = 1e-10;
  double one_step = 0.0;
  double two_step = 0.0;
  double prev_one = -1.0;
  double prev_two = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    Vector w = action(v);
    const double norm = w.norm();
    result.iterations = it;
    if (norm == 0.0 || !std::isfinite(norm)) {
      result.magnitude = std::isfinite(norm) ? 0.0 : norm;
      result.converged = true;
      return result;
    }
    prev_two = two_step;
    two_step = it > 1 ? std::sqrt(norm * one_step) : norm;
    prev_one = one_step;
    one_step = norm;
    v = w / norm;
    if (it > 2 && std::abs(one_step - prev_one) <= rel_tol * one_step) {
      result.magnitude = one_step;
      result.converged = true;
      return result;
    }
    if (it > 3 && std::abs(two_step - prev_two) <= rel_tol * two_step) {
      result.magnitude = two_step;
      result.converged = true;
      return result;
    }
  }
  result.magnitude = two_step;
  return result;
}

double power_iteration_lambda_max(const MatrixAction& action, std::size_t dimension, int max_iter) {
  return power_iteration(action, dimension, max_iter).magnitude;
}

double power_iteration_lambda_max(const Matrix& a, int max_iter) {
  if (a.rows() != a.cols()) throw std::invalid_argument("power iteration: matrix must be square");
  return power_iteration_lambda_max([&a](const Vector& v) -> Vector { return a * v; },
                                    static_cast<std::size_t>(a.rows()), max_iter);
}

double lambda_max_along(const OdeProblem& problem, const std::vector<double>& times,
                        const std::vector<Vector>& states) {
  double lambda = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    lambda = std::max(lambda, jacobian_lambda(problem, states[i], times[i]));
  }
  return lambda;
}

double scan_max_abs(const std::function<double(double)>& g, double a, double b, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    worst = std::max(worst, std::abs(g(a + (b - a) * static_cast<double>(i) / n)));
  }
  const double lo = (b - a) * 1e-9;
  const double ratio = std::log((b - a) / lo);
  for (int i = 0; i <= n; ++i) {
    worst = std::max(worst, std::abs(g(a + lo * std::exp(ratio * static_cast<double>(i) / n))));
  }
  return worst;
}

}  // namespace stabex::oracle
