#pragma once

// Benchmark runs: solve, check against the oracle, report cost, and write
// CSV tables and SVG figures.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stabex/controller.hpp"
#include "stabex/ode.hpp"

namespace stabex::harness {

/// Per-problem solver defaults used by `run` and `bench-all`.
struct BenchmarkDefaults {
  double tolerance = 1e-3;
  std::optional<double> max_step;
  controller::Mode mode = controller::Mode::gap;
};

BenchmarkDefaults defaults_for(const std::string& name);

struct RunOverrides {
  std::optional<double> tolerance;
  std::optional<double> max_step;
  std::optional<double> damping_constant;
  std::optional<controller::Mode> mode;
};

controller::SolverConfig make_config(const std::string& name, const RunOverrides& overrides = {});

struct RunRecord {
  std::string problem;
  controller::SolverConfig config;
  double final_time = 0.0;
  controller::CostReport cost;
  double lambda_max = 0.0;   // oracle estimate behind alpha0
  double final_error = 0.0;  // max-norm error at T against the reference
  std::string reference_method;
  std::optional<double> steady_state_error;  // heat equation only
  double error_estimate = 0.0;
  std::optional<double> paper_ratio;
  double wall_seconds = 0.0;  // solve only; never written to CSV
  Trajectory trajectory;
};

/// Throws controller::IntegrationFailure (with the partial trajectory) when
/// the solve cannot finish, std::invalid_argument for an unknown name.
RunRecord run_benchmark(const std::string& name, const RunOverrides& overrides = {});

/// Threshold checks used for the CLI exit code: error <= 10 TOL, and for
/// problems with a published ratio: within a factor 3 of it and <= 1/5;
/// ratio 1 with no stabilizing step for the nonstiff problem. Returns one
/// message per miss.
std::vector<std::string> threshold_misses(const RunRecord& record);

/// max(ratio / published, published / ratio).
double within_factor(double ratio, double published);

// ---- CSV ----

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);
/// RFC 4180: quote when the field holds a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);
/// Splits RFC 4180 text into records (handles quoted fields and CRLF).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct TrajectoryRow {
  double t = 0.0;
  double k = 0.0;
  StepKind kind = StepKind::regular;
  int iterations = 0;
  double residual = 0.0;

  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

std::vector<TrajectoryRow> trajectory_rows(const Trajectory& trajectory);

/// Header `t,k,kind,iterations,residual`, then one line per row.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text);

void emit_trajectory_csv(const RunRecord& record, const std::filesystem::path& path);

/// Columns problem,alpha,alpha0,ratio,paper_ratio,within_factor.
std::string compare_table(const std::vector<RunRecord>& records);
void emit_compare_table(const std::vector<RunRecord>& records, const std::filesystem::path& path);

/// Two-panel solution / step-size SVG.
void emit_plots(const RunRecord& record, const std::filesystem::path& path);

/// Plain-text table of min_q_for_p over [p_lo, p_hi].
std::string q_table(int p_lo, int p_hi);

void write_text_file(const std::filesystem::path& path, const std::string& text);

struct BenchOptions {
  std::filesystem::path out_dir = "bench";
  bool parallel = true;
  bool plots = true;
};

/// Runs every benchmark with its defaults and writes `<name>.csv`,
/// `<name>.svg` and `compare.csv` into out_dir. Records come back in
/// registry order regardless of scheduling. A failed run is rethrown after
/// all runs have joined.
std::vector<RunRecord> bench_all(const BenchOptions& options);

}  // namespace stabex::harness
