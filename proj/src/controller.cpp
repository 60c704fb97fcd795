#include "stabex/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stabex/solver.hpp"

namespace stabex::controller {

namespace {

// k_n L within this of 1 counts as "no stabilization needed".
constexpr double kUnitSlack = 1e-12;

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::gap ? "gap" : "parabolic"; }

Mode mode_from_string(const std::string& text) {
  if (text == "gap") return Mode::gap;
  if (text == "parabolic") return Mode::parabolic;
  throw std::invalid_argument("unknown mode: " + text);
}

void SolverConfig::validate(double final_time) const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("SolverConfig: TOL must be > 0");
  if (!(tol() > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (!(damping_constant > 0.0 && damping_constant <= 1.0))
    throw std::invalid_argument("SolverConfig: c must lie in (0, 1]");
  if (!(k_max(final_time) > 0.0)) throw std::invalid_argument("SolverConfig: k_max must be > 0");
  const double k1 = k_init(final_time);
  if (!(k1 > 0.0) || k1 > k_max(final_time))
    throw std::invalid_argument("SolverConfig: need 0 < k_init <= k_max");
  if (max_iterations < 2) throw std::invalid_argument("SolverConfig: need at least 2 iterations");
  if (!(stability_factor > 0.0) || !(discrete_stability_factor > 0.0))
    throw std::invalid_argument("SolverConfig: stability factors must be > 0");
}

double SolverConfig::k_init(double final_time) const {
  return initial_step.value_or(std::min(k_max(final_time), final_time / 1000.0));
}

double regulated_step(double k_tilde, double k_prev, double k_max) {
  double k = std::isinf(k_tilde) ? 2.0 * k_prev : 2.0 * k_tilde * k_prev / (k_tilde + k_prev);
  return std::min(k, k_max);
}

double proposed_step(double tolerance, double stability_factor, double residual_norm, double k_max) {
  if (residual_norm == 0.0) return k_max;
  return tolerance / (stability_factor * residual_norm);
}

damping::DampingSequence stabilization_plan(double rate, double k_n, double c, Mode mode) {
  damping::DampingSequence plan;
  const double kl = k_n * rate;
  if (!(rate > 0.0) || !(k_n > 0.0) || !(kl > 1.0 + kUnitSlack) || !std::isfinite(kl)) return plan;

  const double small = c / rate;
  if (mode == Mode::gap) {
    const int m = std::max(1, static_cast<int>(std::ceil(std::log(kl) - kUnitSlack)));
    plan.method = damping::Method::simple;
    plan.steps.assign(static_cast<std::size_t>(m), small);
    plan.params = damping::SimpleDampingParams{k_n, small, m, c};
  } else {
    const int p = std::max(0, static_cast<int>(std::ceil(std::log2(kl) - kUnitSlack)));
    const int q = damping::min_q_for_p(p);
    plan.method = damping::Method::dyadic;
    plan.steps = damping::dyadic_steps(p, q, small);
    plan.params = damping::DyadicParams{p, q, rate / c};
  }
  return plan;
}

double baseline_cost(double lambda_max) { return lambda_max / 2.0; }

std::optional<double> baseline_cost(const OdeProblem& problem, double observed_rate) {
  if (problem.spectral_hint) return baseline_cost(*problem.spectral_hint);
  if (observed_rate > 0.0) return baseline_cost(observed_rate);
  return std::nullopt;
}

CostReport make_cost_report(const Trajectory& trajectory, std::size_t rhs_evaluations,
                            std::size_t fp_iterations, std::size_t bursts, double final_time,
                            std::optional<double> lambda_max) {
  CostReport report;
  report.regular_steps = trajectory.count(StepKind::regular);
  report.stabilizing_steps = trajectory.count(StepKind::stabilizing);
  report.total_fp_iterations = fp_iterations;
  report.rhs_evaluations = rhs_evaluations;
  report.bursts = bursts;
  report.alpha = static_cast<double>(rhs_evaluations) / final_time;
  report.lambda_max = lambda_max.value_or(0.0);
  if (report.stabilizing_steps == 0 || !lambda_max) {
    report.alpha0 = report.alpha;
  } else {
    report.alpha0 = baseline_cost(*lambda_max);
  }
  report.ratio = report.alpha0 > 0.0 ? report.alpha / report.alpha0 : 1.0;
  return report;
}

SolveResult adaptive_solve(const OdeProblem& problem, const SolverConfig& config) {
  problem.validate();
  const double T = problem.final_time;
  config.validate(T);

  std::size_t evaluations = 0;
  OdeProblem counted = problem;
  counted.rhs = [&evaluations, &rhs = problem.rhs](const Vector& u, double t) {
    ++evaluations;
    return rhs(u, t);
  };

  const double k_max = config.k_max(T);
  const double k_floor = config.min_step_fraction * T;
  const double end_slack = 1e-14 * T;
  const solver::FixedPointOptions fp_options{config.tol(), config.max_iterations, 2, 100.0};

  SolveResult result;
  Trajectory& traj = result.trajectory;
  traj = Trajectory(problem.initial, 0.0);

  double t = 0.0;
  Vector u = problem.initial;
  Vector f_u = counted.rhs(u, t);

  double k_prev = config.k_init(T);  // last accepted regular step
  std::optional<double> residual_prev;
  std::optional<double> forced_step;  // set after a failure that calls for halving
  bool retry_after_burst = false;
  std::size_t fp_iterations = 0;
  std::size_t bursts = 0;
  double max_kr = 0.0;
  double max_r = 0.0;

  auto fail = [&](const std::string& why) {
    throw IntegrationFailure("adaptive_solve: " + why + " at t = " + std::to_string(t),
                             std::move(traj));
  };

  while (T - t > end_slack) {
    if (traj.size() >= config.max_nodes) fail("node budget exhausted");

    double k;
    if (forced_step) {
      k = *forced_step;
    } else if (residual_prev) {
      k = regulated_step(
          proposed_step(config.tolerance, config.stability_factor, *residual_prev, k_max), k_prev,
          k_max);
    } else {
      k = k_prev;
    }
    forced_step.reset();
    k = std::min(k, T - t);
    if (k < k_floor && T - t > k_floor) fail("step size fell below the floor");

    auto outcome = solver::cg1_fixed_point_step(u, t, k, counted, fp_options,
                                                problem.autonomous ? &f_u : nullptr);
    fp_iterations += static_cast<std::size_t>(outcome.iterations);

    if (outcome.converged()) {
      Vector f_new = counted.rhs(outcome.final_state, t + k);
      const double residual = solver::continuous_residual(u, outcome.final_state, k, f_new);
      if (!std::isfinite(residual)) fail("nonfinite continuous residual");
      max_kr = std::max(max_kr, k * residual);
      max_r = std::max(max_r, outcome.residual_norms.back());

      t = (T - (t + k) <= end_slack) ? T : t + k;
      TrajectoryNode node{t, outcome.final_state, k, StepKind::regular, outcome.iterations, residual};
      traj.append(std::move(node));
      u = std::move(outcome.final_state);
      f_u = std::move(f_new);
      k_prev = k;
      residual_prev = residual;
      retry_after_burst = false;
      continue;
    }

    // A retry that fails right after a burst means the burst did not buy the
    // step back; give up half of it.
    if (retry_after_burst) k_prev = std::max(0.5 * std::min(k, k_prev), k_floor);

    // An iteration that contracts but runs out of iterations only needs a
    // smaller step; damping is reserved for genuine divergence.
    std::optional<double> rate;
    const bool diverged = outcome.status == solver::FixedPointStatus::diverged ||
                          (outcome.status == solver::FixedPointStatus::nonfinite &&
                           outcome.residual_norms.size() >= 3);
    if (diverged) rate = solver::divergence_rate(outcome.residual_norms, k);
    const auto plan = rate ? stabilization_plan(*rate, k, config.damping_constant, config.mode)
                           : damping::DampingSequence{};
    if (plan.empty()) {
      forced_step = 0.5 * k;
      continue;
    }

    ++bursts;
    result.max_divergence_rate = std::max(result.max_divergence_rate, *rate);
    double residual = 0.0;
    for (double step : plan.steps) {
      if (T - t <= end_slack) break;
      step = std::min(step, T - t);
      Vector next = solver::explicit_euler_step(u, step, f_u);
      if (!all_finite(next)) fail("explicit Euler step overflowed");
      const double t_next = (T - (t + step) <= end_slack) ? T : t + step;
      Vector f_next = counted.rhs(next, t_next);
      residual = solver::continuous_residual(u, next, step, f_next);
      traj.append(TrajectoryNode{t_next, next, step, StepKind::stabilizing, 0, residual});
      t = t_next;
      u = std::move(next);
      f_u = std::move(f_next);
    }
    // Resume at the residual evaluation with the residual of the last damping step.
    residual_prev = residual;
    retry_after_burst = true;
  }

  std::optional<double> lambda_max = problem.spectral_hint;
  if (!lambda_max && result.max_divergence_rate > 0.0) lambda_max = result.max_divergence_rate;
  result.cost = make_cost_report(traj, evaluations, fp_iterations, bursts, T, lambda_max);
  result.error_estimate =
      config.stability_factor * max_kr + config.discrete_stability_factor * max_r;
  return result;
}

}  // namespace stabex::controller
