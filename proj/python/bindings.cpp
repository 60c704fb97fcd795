// Python bindings: damping sequences, the adaptive solver on a Python
// right-hand side, and the benchmark harness.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabex/controller.hpp"
#include "stabex/damping.hpp"
#include "stabex/harness.hpp"
#include "stabex/problems.hpp"

namespace py = pybind11;
using namespace stabex;

namespace {

py::dict cost_dict(const controller::CostReport& c) {
  py::dict d;
  d["alpha"] = c.alpha;
  d["alpha0"] = c.alpha0;
  d["ratio"] = c.ratio;
  d["regular_steps"] = c.regular_steps;
  d["stabilizing_steps"] = c.stabilizing_steps;
  d["fixed_point_iterations"] = c.total_fp_iterations;
  d["rhs_evaluations"] = c.rhs_evaluations;
  d["bursts"] = c.bursts;
  return d;
}

py::dict trajectory_dict(const Trajectory& t) {
  const auto& nodes = t.nodes();
  const Eigen::Index dim = nodes.empty() ? 0 : nodes.front().state.size();
  Eigen::VectorXd times(nodes.size());
  Eigen::VectorXd steps(nodes.size());
  Eigen::MatrixXd states(static_cast<Eigen::Index>(nodes.size()), dim);
  std::vector<std::string> kinds;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto n = static_cast<Eigen::Index>(i);
    times[n] = nodes[i].t;
    steps[n] = nodes[i].step;
    states.row(n) = nodes[i].state.transpose();
    kinds.emplace_back(to_string(nodes[i].kind));
  }
  py::dict d;
  d["t"] = times;
  d["k"] = steps;
  d["u"] = states;
  d["kind"] = kinds;
  return d;
}

controller::SolverConfig make_solver_config(double tol, std::optional<double> k_max, double c,
                                            const std::string& mode) {
  controller::SolverConfig config;
  config.tolerance = tol;
  config.max_step = k_max;
  config.damping_constant = c;
  config.mode = controller::mode_from_string(mode);
  return config;
}

}  // namespace

PYBIND11_MODULE(_stabex, m) {
  m.doc() = "Adaptive explicit time stepping for stiff ODEs";

  py::register_exception<controller::IntegrationFailure>(m, "IntegrationFailure", PyExc_RuntimeError);

  m.def("min_damping_steps", &damping::min_damping_steps, py::arg("big_step_lambda"),
        py::arg("c"));
  m.def("min_q_for_p", &damping::min_q_for_p, py::arg("p"));
  m.def("dyadic_step_count", &damping::dyadic_step_count, py::arg("p"), py::arg("q"));
  m.def("dyadic_poly", &damping::dyadic_poly_scaled, py::arg("y"), py::arg("p"), py::arg("q"),
        "Dyadic damping polynomial on the unit interval.");
  m.def(
      "chebyshev_steps",
      [](double spectral_bound, int degree) {
        return damping::chebyshev_sequence(spectral_bound, degree).steps;
      },
      py::arg("spectral_bound"), py::arg("degree"));
  m.def(
      "dyadic_steps",
      [](double spectral_bound, double max_step) {
        return damping::dyadic_sequence(spectral_bound, max_step).steps;
      },
      py::arg("spectral_bound"), py::arg("max_step"));

  m.def(
      "solve",
      [](const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& rhs,
         const Eigen::VectorXd& u0, double t_final, double tol, std::optional<double> k_max,
         double c, const std::string& mode, std::optional<double> lambda_max) {
        OdeProblem problem;
        problem.dimension = static_cast<std::size_t>(u0.size());
        problem.rhs = rhs;
        problem.initial = u0;
        problem.final_time = t_final;
        problem.autonomous = false;
        problem.spectral_hint = lambda_max;
        const auto result =
            controller::adaptive_solve(problem, make_solver_config(tol, k_max, c, mode));
        py::dict d = trajectory_dict(result.trajectory);
        d["cost"] = cost_dict(result.cost);
        d["error_estimate"] = result.error_estimate;
        return d;
      },
      py::arg("rhs"), py::arg("u0"), py::arg("t_final"), py::arg("tol") = 1e-3,
      py::arg("k_max") = py::none(), py::arg("c") = 0.9, py::arg("mode") = "gap",
      py::arg("lambda_max") = py::none(),
      "Solve u' = rhs(u, t) on [0, t_final]. lambda_max, if given, sets the baseline cost.");

  m.def("benchmark_names", &problems::benchmark_names);
  m.def(
      "run_benchmark",
      [](const std::string& name, std::optional<double> tol, std::optional<double> k_max,
         std::optional<double> c, std::optional<std::string> mode) {
        harness::RunOverrides o{tol, k_max, c, std::nullopt};
        if (mode) o.mode = controller::mode_from_string(*mode);
        harness::RunRecord r;
        {
          py::gil_scoped_release release;
          r = harness::run_benchmark(name, o);
        }
        py::dict d = trajectory_dict(r.trajectory);
        d["problem"] = r.problem;
        d["cost"] = cost_dict(r.cost);
        d["lambda_max"] = r.lambda_max;
        d["final_error"] = r.final_error;
        d["reference"] = r.reference_method;
        d["published_ratio"] = r.paper_ratio;
        d["misses"] = harness::threshold_misses(r);
        return d;
      },
      py::arg("name"), py::arg("tol") = py::none(), py::arg("k_max") = py::none(),
      py::arg("c") = py::none(), py::arg("mode") = py::none());
  m.def("q_table", &harness::q_table, py::arg("p_lo"), py::arg("p_hi"));
}
