#pragma once

// Adaptive cG(1) time stepping with stabilizing explicit Euler bursts.
//
// Each interval: pick k_n from the continuous residual of the previous
// interval, regulated against k_{n-1}; solve the midpoint equations by
// fixed-point iteration. When the iteration diverges, the residual growth
// rate estimates the offending eigenvalue L and a short burst of explicit
// Euler steps of size ~ c/L damps that mode before the interval is retried.

#include <optional>
#include <stdexcept>
#include <string>

#include "stabex/damping.hpp"
#include "stabex/ode.hpp"

namespace stabex::controller {

enum class Mode {
  gap,        // equal damping steps c/L; for spectra with a gap
  parabolic,  // dyadic ramp starting at c/L; for spectra filling [0, lambda_N]
};

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

struct SolverConfig {
  double tolerance = 1e-3;                  // TOL, target error at final time
  std::optional<double> discrete_tolerance;  // tol, fixed-point stop; defaults to TOL
  std::optional<double> max_step;            // k_max; defaults to T
  std::optional<double> initial_step;        // k_1; defaults to min(k_max, T/1000)
  double damping_constant = 0.9;             // c in (0, 1]
  Mode mode = Mode::gap;
  double stability_factor = 1.0;           // S(T)
  double discrete_stability_factor = 1.0;  // S0(T)
  int max_iterations = 10;
  double min_step_fraction = 1e-12;  // step floor as a fraction of T
  std::size_t max_nodes = 20'000'000;

  void validate(double final_time) const;

  [[nodiscard]] double tol() const { return discrete_tolerance.value_or(tolerance); }
  [[nodiscard]] double k_max(double final_time) const { return max_step.value_or(final_time); }
  [[nodiscard]] double k_init(double final_time) const;
};

struct CostReport {
  double alpha = 0.0;   // f-evaluations per unit time
  double alpha0 = 0.0;  // baseline explicit cost per unit time
  double ratio = 1.0;   // alpha / alpha0
  std::size_t regular_steps = 0;
  std::size_t stabilizing_steps = 0;
  std::size_t total_fp_iterations = 0;
  std::size_t rhs_evaluations = 0;
  std::size_t bursts = 0;
  double lambda_max = 0.0;  // eigenvalue magnitude behind alpha0; 0 if none
};

struct SolveResult {
  Trajectory trajectory;
  CostReport cost;
  double max_divergence_rate = 0.0;  // largest L used to size a burst
  /// S max k||R|| + S0 max ||r|| over the accepted intervals.
  double error_estimate = 0.0;
};

/// Thrown when the solver cannot advance; carries the partial trajectory.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  [[nodiscard]] const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Harmonic-mean regulator 2 k~ k_prev / (k~ + k_prev), clamped to k_max.
/// Never exceeds 2 k_prev.
double regulated_step(double k_tilde, double k_prev, double k_max);

/// TOL / (S ||R||); k_max when ||R|| = 0.
double proposed_step(double tolerance, double stability_factor, double residual_norm, double k_max);

/// Burst that stabilizes the mode L after a failed step of size k_n.
/// gap: ceil(ln(k_n L)) steps of size c/L.
/// parabolic: dyadic ramp with p = ceil(log2(k_n L)), q = min_q_for_p(p) and
/// smallest step c/L.
/// Empty when k_n L <= 1.
damping::DampingSequence stabilization_plan(double rate, double k_n, double c, Mode mode);

/// Classical explicit cost lambda_max / 2 (one evaluation per step of size 2/lambda_max).
double baseline_cost(double lambda_max);

/// baseline_cost with lambda_max from the problem's spectral hint, falling
/// back to the largest divergence rate observed during a solve. Empty when
/// neither is available.
std::optional<double> baseline_cost(const OdeProblem& problem, double observed_rate);

/// Assembles a cost report. A run without any stabilizing step is itself the
/// standard method, so its baseline equals its own cost and the ratio is 1.
CostReport make_cost_report(const Trajectory& trajectory, std::size_t rhs_evaluations,
                            std::size_t fp_iterations, std::size_t bursts, double final_time,
                            std::optional<double> lambda_max);

SolveResult adaptive_solve(const OdeProblem& problem, const SolverConfig& config);

}  // namespace stabex::controller
