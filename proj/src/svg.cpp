#include "stabex/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace stabex::svg {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr int kMargin = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Degenerate or empty ranges get a unit-ish pad so flat data stays visible.
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      const double d = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
      lo -= d;
      hi += d;
    }
  }
};

// Maps data coordinates into a panel rectangle.
struct Frame {
  double left, top, width, height;
  Range xr, yr;

  [[nodiscard]] double px(double x) const { return left + (x - xr.lo) / (xr.hi - xr.lo) * width; }
  [[nodiscard]] double py(double y) const { return top + (yr.hi - y) / (yr.hi - yr.lo) * height; }
};

std::string path_of(const std::vector<Point>& pts, const Frame& f) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d += (i == 0 ? "M" : " L");
    d += num(f.px(pts[i].x)) + " " + num(f.py(pts[i].y));
  }
  return d;
}

std::string frame_markup(const Frame& f, const std::string& title, const std::string& y_name,
                         const std::string& y_lo, const std::string& y_hi) {
  std::string s;
  s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) +
       "\" height=\"" + num(f.height) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  s += "<text x=\"" + num(f.left) + "\" y=\"" + num(f.top - 8) + "\" font-size=\"13\">" +
       escape(title) + "</text>\n";
  s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.top + 10) +
       "\" font-size=\"10\" text-anchor=\"end\">" + y_hi + "</text>\n";
  s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.top + f.height) +
       "\" font-size=\"10\" text-anchor=\"end\">" + y_lo + "</text>\n";
  s += "<text x=\"" + num(f.left - 38) + "\" y=\"" + num(f.top + f.height / 2) +
       "\" font-size=\"11\">" + escape(y_name) + "</text>\n";
  s += "<text x=\"" + num(f.left) + "\" y=\"" + num(f.top + f.height + 14) +
       "\" font-size=\"10\">" + label(f.xr.lo) + "</text>\n";
  s += "<text x=\"" + num(f.left + f.width) + "\" y=\"" + num(f.top + f.height + 14) +
       "\" font-size=\"10\" text-anchor=\"end\">" + label(f.xr.hi) + "</text>\n";
  return s;
}

std::string open_svg(int width, int height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         " " + std::to_string(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::vector<Point> decimate(const std::vector<Point>& points, double x_min, double x_max,
                            int columns) {
  if (columns <= 0 || points.size() <= static_cast<std::size_t>(4 * columns) || !(x_max > x_min))
    return points;
  std::vector<Point> out;
  std::size_t i = 0;
  while (i < points.size()) {
    const auto column = [&](double x) {
      return std::clamp(static_cast<int>((x - x_min) / (x_max - x_min) * columns), 0, columns - 1);
    };
    const int c = column(points[i].x);
    std::size_t j = i;
    std::size_t lo = i;
    std::size_t hi = i;
    while (j < points.size() && column(points[j].x) == c) {
      if (points[j].y < points[lo].y) lo = j;
      if (points[j].y > points[hi].y) hi = j;
      ++j;
    }
    std::array<std::size_t, 4> keep = {i, lo, hi, j - 1};
    std::sort(keep.begin(), keep.end());
    for (std::size_t n = 0; n < keep.size(); ++n) {
      if (n == 0 || keep[n] != keep[n - 1]) out.push_back(points[keep[n]]);
    }
    i = j;
  }
  return out;
}

std::string solution_plot(const Trajectory& trajectory, const SolutionPlotOptions& options) {
  const auto& nodes = trajectory.nodes();
  const int w = options.width;
  const int ph = options.panel_height;
  const int height = 2 * ph + 3 * kMargin;
  const double inner_w = w - 2.0 * kMargin;
  const double inner_h = ph - 20.0;

  Range tr;
  for (const auto& n : nodes) tr.add(n.t);
  tr.pad();
  const int columns = static_cast<int>(inner_w);

  // Top panel: every component of U(t).
  Frame top{double(kMargin), double(kMargin), inner_w, inner_h, tr, {}};
  const Eigen::Index dim = nodes.empty() ? 0 : nodes.front().state.size();
  for (const auto& n : nodes)
    for (Eigen::Index c = 0; c < dim; ++c) top.yr.add(n.state[c]);
  top.yr.pad();

  std::string s = open_svg(w, height);
  if (!options.title.empty()) {
    s += "<text x=\"" + num(w / 2.0) + "\" y=\"20\" font-size=\"15\" text-anchor=\"middle\">" +
         escape(options.title) + "</text>\n";
  }
  s += "<g class=\"panel\" id=\"solution\">\n";
  s += frame_markup(top, "U(t)", "U", label(top.yr.lo), label(top.yr.hi));
  for (Eigen::Index c = 0; c < dim; ++c) {
    std::vector<Point> pts;
    pts.reserve(nodes.size());
    for (const auto& n : nodes) pts.push_back({n.t, n.state[c]});
    pts = decimate(pts, tr.lo, tr.hi, columns);
    s += "<path class=\"series\" fill=\"none\" stroke-width=\"1.2\" stroke=\"" +
         std::string(kPalette[static_cast<std::size_t>(c) % kPalette.size()]) + "\" d=\"" +
         path_of(pts, top) + "\"/>\n";
  }
  s += "</g>\n";

  // Bottom panel: log10 k(t), regular and stabilizing steps alike.
  Frame bottom{double(kMargin), double(2 * kMargin + ph), inner_w, inner_h, tr, {}};
  std::vector<Point> steps;
  for (const auto& n : nodes) {
    if (n.step > 0.0) steps.push_back({n.t, std::log10(n.step)});
  }
  for (const auto& p : steps) bottom.yr.add(p.y);
  if (options.baseline_step && *options.baseline_step > 0.0)
    bottom.yr.add(std::log10(*options.baseline_step));
  bottom.yr.pad();
  steps = decimate(steps, tr.lo, tr.hi, columns);

  s += "<g class=\"panel\" id=\"steps\">\n";
  s += frame_markup(bottom, "k(t), log scale", "k", "1e" + label(bottom.yr.lo),
                    "1e" + label(bottom.yr.hi));
  if (!steps.empty()) {
    s += "<path class=\"series\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" d=\"" +
         path_of(steps, bottom) + "\"/>\n";
  }
  if (options.baseline_step && *options.baseline_step > 0.0) {
    const double y = bottom.py(std::log10(*options.baseline_step));
    s += "<line class=\"baseline\" x1=\"" + num(bottom.left) + "\" y1=\"" + num(y) + "\" x2=\"" +
         num(bottom.left + bottom.width) + "\" y2=\"" + num(y) +
         "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

RegionGrid region_grid(const damping::Params& params, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("region_grid: need at least 2x2 nodes");
  const double extent = damping::region_real_extent(params);
  RegionGrid g;
  g.nx = nx;
  g.ny = ny;
  g.x_min = -extent - 5.0;
  g.x_max = 1.0;
  g.y_half = (extent + 6.0) / 3.0;
  g.level.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::complex<double> z{g.x(i), g.y(j)};
      const std::complex<double> v = std::visit(
          [&z](const auto& p) -> std::complex<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, damping::SimpleDampingParams>) {
              throw std::invalid_argument("region_grid: simple damping has no region polynomial");
            } else {
              return damping::eval_region_poly(z, p);
            }
          },
          params);
      const double mag = std::abs(v);
      // Overflow far outside the region reads as "outside".
      g.level[static_cast<std::size_t>(j * nx + i)] = std::isfinite(mag) ? mag - 1.0 : 1.0;
    }
  }
  return g;
}

std::vector<Segment> contour_segments(const RegionGrid& g) {
  std::vector<Segment> out;
  const auto cross = [&g](int i0, int j0, int i1, int j1) {
    const double a = g.at(i0, j0);
    const double b = g.at(i1, j1);
    const double s = a / (a - b);
    return Point{g.x(i0) + s * (g.x(i1) - g.x(i0)), g.y(j0) + s * (g.y(j1) - g.y(j0))};
  };
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      // Corners counter-clockwise from (i, j); edge e joins corner e and e + 1.
      const std::array<std::array<int, 2>, 4> c = {{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<bool, 4> inside{};
      int count = 0;
      for (int n = 0; n < 4; ++n) {
        inside[n] = g.at(c[n][0], c[n][1]) <= 0.0;
        count += inside[n];
      }
      if (count == 0 || count == 4) continue;
      std::array<Point, 4> hit{};
      std::array<bool, 4> has{};
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if (inside[e] != inside[f]) {
          hit[e] = cross(c[e][0], c[e][1], c[f][0], c[f][1]);
          has[e] = true;
        }
      }
      if (has[0] && has[1] && has[2] && has[3]) {
        // Saddle: the cell centre decides which corners connect.
        const double centre = 0.25 * (g.at(i, j) + g.at(i + 1, j) + g.at(i + 1, j + 1) + g.at(i, j + 1));
        if ((centre <= 0.0) == inside[0]) {
          out.push_back({hit[0], hit[1]});
          out.push_back({hit[2], hit[3]});
        } else {
          out.push_back({hit[3], hit[0]});
          out.push_back({hit[1], hit[2]});
        }
        continue;
      }
      std::vector<Point> pts;
      for (int e = 0; e < 4; ++e)
        if (has[e]) pts.push_back(hit[e]);
      if (pts.size() == 2) out.push_back({pts[0], pts[1]});
    }
  }
  return out;
}

std::string region_plot(const damping::Params& params, const std::string& title) {
  const RegionGrid g = region_grid(params);
  const auto segments = contour_segments(g);
  const int w = g.nx;
  const int h = g.ny;
  const int width = w + 2 * kMargin;
  const int height = h + 2 * kMargin;
  Frame f{double(kMargin), double(kMargin), double(w), double(h), {g.x_min, g.x_max},
          {-g.y_half, g.y_half}};

  std::string s = open_svg(width, height);
  s += "<g class=\"panel\" id=\"region\">\n";
  s += frame_markup(f, title, "Im z", label(-g.y_half), label(g.y_half));
  s += "<line x1=\"" + num(f.px(g.x_min)) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" +
       num(f.px(g.x_max)) + "\" y2=\"" + num(f.py(0)) + "\" stroke=\"#bbb\"/>\n";
  s += "<line x1=\"" + num(f.px(0)) + "\" y1=\"" + num(f.py(-g.y_half)) + "\" x2=\"" +
       num(f.px(0)) + "\" y2=\"" + num(f.py(g.y_half)) + "\" stroke=\"#bbb\"/>\n";
  std::string d;
  for (const auto& seg : segments) {
    if (!d.empty()) d += ' ';
    d += "M" + num(f.px(seg.a.x)) + " " + num(f.py(seg.a.y)) + " L" + num(f.px(seg.b.x)) + " " +
         num(f.py(seg.b.y));
  }
  s += "<path class=\"contour\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" d=\"" + d +
       "\"/>\n";
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace stabex::svg
