#pragma once

// Single-interval integrators: explicit Euler and the cG(1) midpoint step
// solved by fixed-point iteration, plus the residuals that drive adaptivity.

#include <optional>
#include <vector>

#include "stabex/ode.hpp"

namespace stabex::solver {

/// u + k f(u, t). The result may be nonfinite; callers treat that as blow-up.
Vector explicit_euler_step(const Vector& u, double t, double k, const OdeProblem& problem);

/// Overload reusing a precomputed f(u, t).
inline Vector explicit_euler_step(const Vector& u, double k, const Vector& f_u) { return u + k * f_u; }

struct FixedPointOptions {
  double tol = 1e-3;
  int max_iter = 10;
  /// Stop once the residual norm has grown this many consecutive times.
  /// Zero disables the early exit.
  int divergence_patience = 2;
  /// Also stop after a single growth by at least this factor; beyond it the
  /// next iterate tends to leave the range where the linearization holds.
  /// Zero disables.
  double divergence_jump = 100.0;
};

enum class FixedPointStatus { converged, not_converged, diverged, nonfinite };

struct FixedPointOutcome {
  Vector final_state;
  std::vector<double> residual_norms;  // ||r^{n,l}||, l = 1, 2, ...
  FixedPointStatus status = FixedPointStatus::not_converged;
  int iterations = 0;
  /// f at the midpoint of the last iterate; equals f(u_prev) before any iteration.
  Vector last_midpoint_rhs;

  [[nodiscard]] bool converged() const { return status == FixedPointStatus::converged; }
};

/// Solves U = u_prev + k f((u_prev + U)/2, t_prev + k/2) by fixed-point
/// iteration from U^0 = u_prev. Each iteration costs one f-evaluation; the
/// optional f(u_prev) saves one more (only valid for autonomous problems,
/// since the first iterate needs f at the interval midpoint time).
FixedPointOutcome cg1_fixed_point_step(const Vector& u_prev, double t_prev, double k,
                                       const OdeProblem& problem, const FixedPointOptions& options,
                                       const Vector* rhs_at_prev = nullptr);

/// r = (u_cand - u_prev)/k - f((u_prev + u_cand)/2). Zero for the exact cG(1) solution.
Vector discrete_residual(const Vector& u_prev, const Vector& u_cand, double t_prev, double k,
                         const OdeProblem& problem);

/// ||(u_new - u_prev)/k - f(u_new, t_new)||, the continuous residual of the
/// linear interpolant at the right endpoint.
double continuous_residual(const Vector& u_prev, const Vector& u_new, double t_new, double k,
                           const OdeProblem& problem);

/// Same, reusing f(u_new, t_new).
inline double continuous_residual(const Vector& u_prev, const Vector& u_new, double k,
                                  const Vector& rhs_at_new) {
  return max_norm((u_new - u_prev) / k - rhs_at_new);
}

/// Dominant unstable eigenvalue estimate L = (2/k) ||r^l|| / ||r^{l-1}||.
/// With four or more norms the geometric mean of the last two ratios is used.
/// Empty when the history is too short or a denominator vanishes.
std::optional<double> divergence_rate(const std::vector<double>& residual_norms, double k);

}  // namespace stabex::solver
