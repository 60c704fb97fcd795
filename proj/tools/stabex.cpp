// stabex: run the stiff benchmarks, compare costs, and draw damping regions.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 integration failure,
// 3 a threshold check missed.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "stabex/damping.hpp"
#include "stabex/harness.hpp"
#include "stabex/problems.hpp"
#include "stabex/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace stabex;

constexpr int kIntegrationFailure = 2;
constexpr int kThresholdMiss = 3;

void print_record(const harness::RunRecord& r) {
  const auto& c = r.cost;
  std::printf(
      "%-10s alpha=%-10.4g alpha0=%-10.4g ratio=%-10.4g published=%-8s regular=%zu stabilizing=%zu "
      "bursts=%zu error=%.3g time=%.2fs\n",
      r.problem.c_str(), c.alpha, c.alpha0, c.ratio,
      r.paper_ratio ? ("1/" + std::to_string(static_cast<int>(std::lround(1.0 / *r.paper_ratio))))
                          .c_str()
                    : "-",
      c.regular_steps, c.stabilizing_steps, c.bursts, r.final_error, r.wall_seconds);
}

int report_misses(const harness::RunRecord& r) {
  const auto misses = harness::threshold_misses(r);
  for (const auto& m : misses) std::fprintf(stderr, "%s: %s\n", r.problem.c_str(), m.c_str());
  return misses.empty() ? 0 : kThresholdMiss;
}

// "m" for chebyshev, "p,q" for dyadic.
damping::Params region_params(const std::string& method, const std::string& text) {
  if (method == "chebyshev") {
    const int m = std::stoi(text);
    damping::ChebyshevParams p{m, 1.0, 1.0};
    p.validate();
    return p;
  }
  if (method == "dyadic") {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("dyadic --params expects p,q");
    damping::DyadicParams p{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1)), 1.0};
    p.validate();
    return p;
  }
  throw std::invalid_argument("--method must be chebyshev or dyadic");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit time stepping for stiff ODEs with stabilizing damping steps"};
  app.require_subcommand(1);

  std::string problem;
  harness::RunOverrides overrides;
  std::string mode;
  std::string out_dir = ".";
  bool plot = false;
  bool csv = false;
  auto* run = app.add_subcommand("run", "Solve one benchmark and report its cost");
  run->add_option("--problem", problem, "Benchmark name")
      ->required()
      ->check(CLI::IsMember(problems::benchmark_names()));
  run->add_option("--tol", overrides.tolerance, "Tolerance TOL")->check(CLI::PositiveNumber);
  run->add_option("--kmax", overrides.max_step, "Largest step")->check(CLI::PositiveNumber);
  run->add_option("--c", overrides.damping_constant, "Damping constant in (0, 1]");
  run->add_option("--mode", mode, "Damping mode")->check(CLI::IsMember({"gap", "parabolic"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--plot", plot, "Write <problem>.svg");
  run->add_flag("--csv", csv, "Write <problem>.csv");

  std::string bench_out = "bench";
  bool serial = false;
  auto* bench = app.add_subcommand("bench-all", "Run every benchmark and write the comparison");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_flag("--serial", serial, "Run the problems one after another");

  std::string method;
  std::string params;
  std::string region_out;
  auto* region = app.add_subcommand("region", "Draw the stability region of a damping polynomial");
  region->add_option("--method", method, "chebyshev or dyadic")
      ->required()
      ->check(CLI::IsMember({"chebyshev", "dyadic"}));
  region->add_option("--params", params, "m (chebyshev) or p,q (dyadic)")->required();
  region->add_option("--out", region_out, "SVG file")->required();

  std::string p_range = "0..16";
  auto* table = app.add_subcommand("table", "Print the smallest stable q for each p");
  table->add_option("--p-range", p_range, "Range lo..hi");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (!mode.empty()) overrides.mode = controller::mode_from_string(mode);
      harness::RunRecord record;
      try {
        record = harness::run_benchmark(problem, overrides);
      } catch (const controller::IntegrationFailure& e) {
        std::fprintf(stderr, "integration failure: %s\n", e.what());
        harness::RunRecord partial;
        partial.problem = problem;
        partial.trajectory = e.partial();
        harness::emit_trajectory_csv(partial, fs::path(out_dir) / (problem + ".partial.csv"));
        return kIntegrationFailure;
      }
      print_record(record);
      if (csv) harness::emit_trajectory_csv(record, fs::path(out_dir) / (problem + ".csv"));
      if (plot) harness::emit_plots(record, fs::path(out_dir) / (problem + ".svg"));
      return report_misses(record);
    }

    if (*bench) {
      harness::BenchOptions options;
      options.out_dir = bench_out;
      options.parallel = !serial;
      std::vector<harness::RunRecord> records;
      try {
        records = harness::bench_all(options);
      } catch (const controller::IntegrationFailure& e) {
        std::fprintf(stderr, "integration failure: %s\n", e.what());
        return kIntegrationFailure;
      }
      int status = 0;
      for (const auto& r : records) {
        print_record(r);
        status = std::max(status, report_misses(r));
      }
      return status;
    }

    if (*region) {
      const damping::Params p = region_params(method, params);
      harness::write_text_file(region_out, svg::region_plot(p, method + " " + params));
      return 0;
    }

    if (*table) {
      const auto dots = p_range.find("..");
      if (dots == std::string::npos) throw std::invalid_argument("--p-range expects lo..hi");
      std::cout << harness::q_table(std::stoi(p_range.substr(0, dots)),
                                    std::stoi(p_range.substr(dots + 2)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
