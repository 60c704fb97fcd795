#include "stabex/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace stabex::solver {

Vector explicit_euler_step(const Vector& u, double t, double k, const OdeProblem& problem) {
  if (k == 0.0) return u;
  return u + k * problem.rhs(u, t);
}

FixedPointOutcome cg1_fixed_point_step(const Vector& u_prev, double t_prev, double k,
                                       const OdeProblem& problem, const FixedPointOptions& options,
                                       const Vector* rhs_at_prev) {
  if (!(k > 0.0)) throw std::invalid_argument("cg1_fixed_point_step: k must be > 0");
  if (!(options.tol > 0.0)) throw std::invalid_argument("cg1_fixed_point_step: tol must be > 0");
  if (options.max_iter < 1) throw std::invalid_argument("cg1_fixed_point_step: max_iter must be >= 1");

  const double t_mid = t_prev + 0.5 * k;
  FixedPointOutcome out;
  out.last_midpoint_rhs = rhs_at_prev ? *rhs_at_prev : problem.rhs(u_prev, t_mid);
  out.final_state = u_prev;

  int growth_streak = 0;
  for (int l = 1; l <= options.max_iter; ++l) {
    Vector next = u_prev + k * out.last_midpoint_rhs;
    Vector rhs_mid = problem.rhs(0.5 * (u_prev + next), t_mid);
    const double norm = max_norm((next - u_prev) / k - rhs_mid);

    out.iterations = l;
    out.final_state = std::move(next);
    out.last_midpoint_rhs = std::move(rhs_mid);
    out.residual_norms.push_back(norm);

    if (!std::isfinite(norm) || !all_finite(out.final_state)) {
      out.status = FixedPointStatus::nonfinite;
      return out;
    }
    if (norm <= options.tol) {
      out.status = FixedPointStatus::converged;
      return out;
    }
    if (l >= 2) {
      const double prev = out.residual_norms[out.residual_norms.size() - 2];
      growth_streak = norm > prev ? growth_streak + 1 : 0;
      const bool streak = options.divergence_patience > 0 && growth_streak >= options.divergence_patience;
      const bool jump = options.divergence_jump > 0.0 && norm >= options.divergence_jump * prev;
      if (streak || jump) {
        out.status = FixedPointStatus::diverged;
        return out;
      }
    }
  }
  out.status = FixedPointStatus::not_converged;
  return out;
}

Vector discrete_residual(const Vector& u_prev, const Vector& u_cand, double t_prev, double k,
                         const OdeProblem& problem) {
  if (!(k > 0.0)) throw std::invalid_argument("discrete_residual: k must be > 0");
  return (u_cand - u_prev) / k - problem.rhs(0.5 * (u_prev + u_cand), t_prev + 0.5 * k);
}

double continuous_residual(const Vector& u_prev, const Vector& u_new, double t_new, double k,
                           const OdeProblem& problem) {
  if (!(k > 0.0)) throw std::invalid_argument("continuous_residual: k must be > 0");
  return continuous_residual(u_prev, u_new, k, problem.rhs(u_new, t_new));
}

std::optional<double> divergence_rate(const std::vector<double>& residual_norms, double k) {
  const std::size_t n = residual_norms.size();
  if (n < 2 || !(k > 0.0)) return std::nullopt;
  const double last = residual_norms[n - 1];
  const double prev = residual_norms[n - 2];
  if (!(prev > 0.0) || !std::isfinite(last)) return std::nullopt;

  double ratio = last / prev;
  if (n >= 4) {
    const double before = residual_norms[n - 3];
    if (!(before > 0.0)) return std::nullopt;
    ratio = std::sqrt(last / before);
  }
  return 2.0 / k * ratio;
}

}  // namespace stabex::solver
