#pragma once

// Independent references used by tests and for the cost baseline. Nothing
// here shares code paths with the adaptive solver.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabex/ode.hpp"

namespace stabex::oracle {

struct ReferenceSolution {
  std::vector<double> times;
  std::vector<Vector> states;
  std::string method;  // "analytic" or "rk4"
  double step = 0.0;   // smallest RK4 step used; 0 for analytic

  [[nodiscard]] const Vector& at_final() const { return states.back(); }
};

class OracleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// States at the requested (ascending, within [0, T]) sample times. Uses the
/// analytic solution when given, otherwise classical RK4 with fixed step
/// 0.1 / lambda_max. Without a spectral hint lambda_max comes from the
/// finite-difference Jacobian and is re-estimated along the way; the step
/// only ever shrinks.
ReferenceSolution reference_solve(const OdeProblem& problem, const std::vector<double>& samples,
                                  const std::function<Vector(double)>& analytic = {},
                                  std::size_t max_steps = 20'000'000);

/// Same with a prescribed fixed step (used for convergence-order checks).
ReferenceSolution rk4_fixed(const OdeProblem& problem, const std::vector<double>& samples,
                            double step);

/// Central differences with delta_i = max(1e-7, 1e-7 |u_i|).
Matrix finite_difference_jacobian(const OdeProblem& problem, const Vector& u, double t);

using MatrixAction = std::function<Vector(const Vector&)>;

struct PowerIterationResult {
  double magnitude = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Dominant eigenvalue magnitude by power iteration (relative tolerance
/// 1e-10, at most max_iter products). When the one-step ratio fails to
/// settle (a complex dominant pair) the two-step estimate sqrt(||A^2 v||/||v||)
/// is reported.
PowerIterationResult power_iteration(const MatrixAction& action, std::size_t dimension,
                                     int max_iter = 1000);

double power_iteration_lambda_max(const Matrix& a, int max_iter = 1000);
double power_iteration_lambda_max(const MatrixAction& action, std::size_t dimension,
                                  int max_iter = 1000);

/// Largest dominant-eigenvalue magnitude of the Jacobian over the given
/// states (analytic Jacobian when present, finite differences otherwise).
double lambda_max_along(const OdeProblem& problem, const std::vector<double>& times,
                        const std::vector<Vector>& states);

/// max |g| over n+1 uniform points of [a, b] together with n+1 log-spaced
/// points of [a + (b - a) 1e-9, b].
double scan_max_abs(const std::function<double(double)>& g, double a, double b,
                    int n = 100000);

}  // namespace stabex::oracle
