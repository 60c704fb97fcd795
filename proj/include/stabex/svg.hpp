#pragma once

// Minimal SVG output for solution/step-size figures and stability regions.

#include <optional>
#include <string>
#include <vector>

#include "stabex/damping.hpp"
#include "stabex/ode.hpp"

namespace stabex::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Keeps at most ~4 points per pixel column (first, min, max, last) so
/// short bursts survive decimation. Input must be sorted by x.
std::vector<Point> decimate(const std::vector<Point>& points, double x_min, double x_max,
                            int columns);

struct SolutionPlotOptions {
  std::string title;
  /// Dashed reference line in the step panel (the explicit limit 2/lambda).
  std::optional<double> baseline_step;
  int width = 800;
  int panel_height = 300;
};

/// Two stacked panels: components of U(t) on top, k(t) on a log scale below.
std::string solution_plot(const Trajectory& trajectory, const SolutionPlotOptions& options);

/// Sampled |P(z)| <= 1 indicator over [x_min, x_max] x [-r, r].
struct RegionGrid {
  int nx = 0;
  int ny = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_half = 0.0;
  std::vector<double> level;  // |P| - 1 at node (i, j), index j * nx + i

  [[nodiscard]] double x(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
  [[nodiscard]] double y(int j) const { return -y_half + 2.0 * y_half * j / (ny - 1); }
  [[nodiscard]] double at(int i, int j) const { return level[static_cast<std::size_t>(j * nx + i)]; }
};

/// Grid over [-E - 5, 1] x [-r, r] with E the real extent of the region
/// and r = (E + 6) / 3, so the plot keeps a 3:2 aspect.
RegionGrid region_grid(const damping::Params& params, int nx = 600, int ny = 400);

struct Segment {
  Point a;
  Point b;
};

/// Marching squares for the zero level set of the grid (in data coordinates).
std::vector<Segment> contour_segments(const RegionGrid& grid);

/// Region boundary |P(z)| = 1 with axes.
std::string region_plot(const damping::Params& params, const std::string& title);

}  // namespace stabex::svg
