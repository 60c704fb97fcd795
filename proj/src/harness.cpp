#include "stabex/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include "stabex/damping.hpp"
#include "stabex/oracle.hpp"
#include "stabex/problems.hpp"
#include "stabex/svg.hpp"

namespace stabex::harness {

namespace {

constexpr int kReferenceSamples = 50;
constexpr double kErrorFactor = 10.0;
constexpr double kRatioFactor = 3.0;
constexpr double kRatioCeiling = 0.2;

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

std::string short_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

int parse_int(const std::string& text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + text + "'");
  return value;
}

}  // namespace

BenchmarkDefaults defaults_for(const std::string& name) {
  BenchmarkDefaults d;
  if (name == "hires" || name == "vdp") {
    d.tolerance = 1e-2;
  } else if (name == "akzo") {
    d.tolerance = 1e-2;
    d.max_step = 1.0;
  } else if (name == "heat") {
    d.tolerance = 1e-2;
    d.mode = controller::Mode::parabolic;
  } else if (name != "test-eq" && name != "test-sys" && name != "nonnormal" && name != "nonstiff") {
    throw std::invalid_argument("unknown benchmark: " + name);
  }
  return d;
}

controller::SolverConfig make_config(const std::string& name, const RunOverrides& overrides) {
  const BenchmarkDefaults d = defaults_for(name);
  controller::SolverConfig config;
  config.tolerance = overrides.tolerance.value_or(d.tolerance);
  config.max_step = overrides.max_step ? overrides.max_step : d.max_step;
  config.mode = overrides.mode.value_or(d.mode);
  if (overrides.damping_constant) config.damping_constant = *overrides.damping_constant;
  return config;
}

RunRecord run_benchmark(const std::string& name, const RunOverrides& overrides) {
  const problems::BenchmarkProblem bench = problems::make_benchmark(name);
  const OdeProblem& problem = bench.problem;
  const double T = problem.final_time;

  RunRecord record;
  record.problem = name;
  record.config = make_config(name, overrides);
  record.final_time = T;
  record.paper_ratio = bench.paper_cost_ratio;

  const auto start = std::chrono::steady_clock::now();
  controller::SolveResult result = controller::adaptive_solve(problem, record.config);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<double> samples;
  for (int i = 0; i <= kReferenceSamples; ++i) samples.push_back(T * i / kReferenceSamples);
  samples.back() = T;
  const oracle::ReferenceSolution reference =
      oracle::reference_solve(problem, samples, bench.analytic);
  record.reference_method = reference.method;
  record.lambda_max = oracle::lambda_max_along(problem, reference.times, reference.states);

  const controller::CostReport& c = result.cost;
  record.cost = controller::make_cost_report(result.trajectory, c.rhs_evaluations,
                                             c.total_fp_iterations, c.bursts, T,
                                             record.lambda_max);
  record.error_estimate = result.error_estimate;
  record.final_error = max_norm(result.trajectory.back().state - reference.at_final());
  if (name == "heat") {
    record.steady_state_error =
        max_norm(result.trajectory.back().state - problems::heat_steady_state(0.01));
  }
  record.trajectory = std::move(result.trajectory);
  return record;
}

double within_factor(double ratio, double paper_ratio) {
  return std::max(ratio / paper_ratio, paper_ratio / ratio);
}

std::vector<std::string> threshold_misses(const RunRecord& r) {
  std::vector<std::string> misses;
  const double tol = r.config.tolerance;
  if (!(r.final_error <= kErrorFactor * tol))
    misses.push_back("final error " + short_number(r.final_error) + " > 10 TOL");
  if (r.steady_state_error && !(*r.steady_state_error <= kErrorFactor * tol))
    misses.push_back("steady-state error " + short_number(*r.steady_state_error) + " > 10 TOL");
  if (!r.paper_ratio) return misses;
  if (*r.paper_ratio == 1.0) {
    if (r.cost.ratio != 1.0) misses.push_back("ratio " + short_number(r.cost.ratio) + " != 1");
    if (r.cost.stabilizing_steps != 0) misses.push_back("stabilizing steps taken");
    return misses;
  }
  const double factor = within_factor(r.cost.ratio, *r.paper_ratio);
  if (!(factor <= kRatioFactor))
    misses.push_back("ratio off the published one by a factor " + short_number(factor));
  if (!(r.cost.ratio <= kRatioCeiling))
    misses.push_back("ratio " + short_number(r.cost.ratio) + " > 1/5");
  return misses;
}

// ---- CSV ----

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return {buf, ptr};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;  // current record has content
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("parse_csv: unterminated quoted field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& trajectory) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(trajectory.size());
  for (const auto& n : trajectory.nodes())
    rows.push_back({n.t, n.step, n.kind, n.iterations, n.residual});
  return rows;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "t,k,kind,iterations,residual\r\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.k) << ',' << csv_escape(to_string(r.kind))
        << ',' << r.iterations << ',' << format_double(r.residual) << "\r\n";
  }
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream out;
  write_trajectory_csv(out, rows);
  return out.str();
}

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
  const auto records = parse_csv(text);
  if (records.empty()) throw std::invalid_argument("trajectory CSV: missing header");
  const std::vector<std::string> header = {"t", "k", "kind", "iterations", "residual"};
  if (records.front() != header) throw std::invalid_argument("trajectory CSV: unexpected header");
  std::vector<TrajectoryRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != header.size())
      throw std::invalid_argument("trajectory CSV: row " + std::to_string(i) + " has " +
                                  std::to_string(f.size()) + " fields");
    rows.push_back({parse_double(f[0]), parse_double(f[1]), step_kind_from_string(f[2]),
                    parse_int(f[3]), parse_double(f[4])});
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

void emit_trajectory_csv(const RunRecord& record, const std::filesystem::path& path) {
  write_text_file(path, trajectory_csv(trajectory_rows(record.trajectory)));
}

std::string compare_table(const std::vector<RunRecord>& records) {
  std::string s = "problem,alpha,alpha0,ratio,paper_ratio,within_factor\r\n";
  for (const auto& r : records) {
    s += csv_escape(r.problem) + ',' + format_double(r.cost.alpha) + ',' +
         format_double(r.cost.alpha0) + ',' + format_double(r.cost.ratio) + ',';
    if (r.paper_ratio) {
      s += format_double(*r.paper_ratio) + ',' +
           format_double(within_factor(r.cost.ratio, *r.paper_ratio));
    } else {
      s += ',';
    }
    s += "\r\n";
  }
  return s;
}

void emit_compare_table(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  write_text_file(path, compare_table(records));
}

void emit_plots(const RunRecord& record, const std::filesystem::path& path) {
  svg::SolutionPlotOptions options;
  char title[160];
  std::snprintf(title, sizeof title, "%s: alpha = %.3g, alpha/alpha0 = %.3g", record.problem.c_str(),
                record.cost.alpha, record.cost.ratio);
  options.title = title;
  if (record.lambda_max > 0.0) options.baseline_step = 2.0 / record.lambda_max;
  write_text_file(path, svg::solution_plot(record.trajectory, options));
}

std::string q_table(int p_lo, int p_hi) {
  if (p_lo < 0 || p_hi < p_lo) throw std::invalid_argument("q_table: need 0 <= p_lo <= p_hi");
  std::string s = "p,q,steps\n";
  for (int p = p_lo; p <= p_hi; ++p) {
    const int q = damping::min_q_for_p(p);
    s += std::to_string(p) + ',' + std::to_string(q) + ',' +
         std::to_string(damping::dyadic_step_count(p, q)) + '\n';
  }
  return s;
}

std::vector<RunRecord> bench_all(const BenchOptions& options) {
  const auto& names = problems::benchmark_names();
  std::vector<RunRecord> records(names.size());
  std::vector<std::exception_ptr> errors(names.size());

  auto run_one = [&](std::size_t i) {
    try {
      records[i] = run_benchmark(names[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (options.parallel) {
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < names.size(); ++i) workers.emplace_back(run_one, i);
    for (auto& w : workers) w.join();
  } else {
    for (std::size_t i = 0; i < names.size(); ++i) run_one(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::filesystem::create_directories(options.out_dir);
  for (const auto& r : records) {
    emit_trajectory_csv(r, options.out_dir / (r.problem + ".csv"));
    if (options.plots) emit_plots(r, options.out_dir / (r.problem + ".svg"));
  }
  emit_compare_table(records, options.out_dir / "compare.csv");
  return records;
}

}  // namespace stabex::harness
