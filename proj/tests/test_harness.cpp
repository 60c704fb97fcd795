#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "stabex/harness.hpp"
#include "stabex/svg.hpp"

using namespace stabex;
using namespace stabex::harness;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Trajectory constant_trajectory() {
  Trajectory t(Vector::Constant(2, 0.5));
  for (int i = 1; i <= 10; ++i)
    t.append({0.1 * i, Vector::Constant(2, 0.5), 0.1, StepKind::regular, 1, 0.0});
  return t;
}

}  // namespace

TEST_CASE("shortest round-trip doubles") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("RFC 4180 quoting and parsing") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");

  const auto rows = parse_csv("a,\"b,c\",\"d\"\"e\"\r\n1,,\"x\r\ny\"\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(rows[1] == std::vector<std::string>{"1", "", "x\r\ny"});
  CHECK(parse_csv("").empty());
  CHECK_THROWS(parse_csv("\"open"));
}

TEST_CASE("trajectory CSV") {
  CHECK(trajectory_csv({}) == "t,k,kind,iterations,residual\r\n");
  const std::vector<TrajectoryRow> one = {{0.0, 0.0, StepKind::regular, 0, 0.0}};
  const std::string text = trajectory_csv(one);
  CHECK(count_of(text, "\r\n") == 2);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<TrajectoryRow> rows;
  double t = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double k = std::exp(-30.0 * d(rng));
    t += k;
    rows.push_back({t, k, i % 3 == 0 ? StepKind::stabilizing : StepKind::regular,
                    static_cast<int>(rng() % 10), d(rng) * 1e-3});
  }
  rows.push_back({t + 1.0, 1.0, StepKind::regular, 1, std::numeric_limits<double>::infinity()});
  const std::string csv = trajectory_csv(rows);
  CHECK(count_of(csv, "\r\n") == rows.size() + 1);
  CHECK(parse_trajectory_csv(csv) == rows);
  CHECK_THROWS(parse_trajectory_csv("x,y\r\n"));
  CHECK_THROWS(parse_trajectory_csv("t,k,kind,iterations,residual\r\n1,2,sideways,0,0\r\n"));
}

TEST_CASE("compare table") {
  CHECK(compare_table({}) == "problem,alpha,alpha0,ratio,paper_ratio,within_factor\r\n");
  RunRecord r;
  r.problem = "x";
  r.cost.alpha = 2.0;
  r.cost.alpha0 = 20.0;
  r.cost.ratio = 0.1;
  r.paper_ratio = 0.05;
  const auto rows = parse_csv(compare_table({r}));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == std::vector<std::string>{"x", "2", "20", "0.1", "0.05", "2"});
  for (double a : {0.01, 0.3, 1.0})
    for (double b : {0.02, 0.5, 1.0}) CHECK(within_factor(a, b) >= 1.0);
}

TEST_CASE("threshold checks") {
  RunRecord r;
  r.problem = "x";
  r.config.tolerance = 1e-3;
  r.final_error = 1e-3;
  r.paper_ratio = 1.0 / 30.0;
  r.cost.ratio = 1.0 / 20.0;
  CHECK(threshold_misses(r).empty());
  r.cost.ratio = 1.0 / 4.0;
  CHECK(threshold_misses(r).size() == 2);
  r.final_error = 1.0;
  CHECK(threshold_misses(r).size() == 3);
}

TEST_CASE("defaults and overrides") {
  CHECK(defaults_for("heat").mode == controller::Mode::parabolic);
  CHECK(*defaults_for("akzo").max_step == 1.0);
  CHECK(defaults_for("test-eq").tolerance == 1e-3);
  CHECK(defaults_for("vdp").tolerance == 1e-2);
  CHECK_THROWS(defaults_for("nope"));
  RunOverrides o;
  o.tolerance = 0.5;
  o.mode = controller::Mode::parabolic;
  const auto c = make_config("test-eq", o);
  CHECK(c.tolerance == 0.5);
  CHECK(c.mode == controller::Mode::parabolic);
}

TEST_CASE("q table") {
  const std::string t = q_table(0, 6);
  CHECK(t.rfind("p,q,steps\n", 0) == 0);
  CHECK(t.find("6,3,18\n") != std::string::npos);
  CHECK_THROWS(q_table(3, 1));
}

TEST_CASE("solution plot") {
  const auto svg_text = svg::solution_plot(constant_trajectory(), {"flat", 0.05});
  CHECK(count_of(svg_text, "class=\"panel\"") == 2);
  CHECK(count_of(svg_text, "class=\"baseline\"") == 1);
  // A constant solution draws horizontal paths: every vertex shares one y.
  const std::regex path_re("class=\"series\"[^>]*d=\"([^\"]*)\"");
  auto it = std::sregex_iterator(svg_text.begin(), svg_text.end(), path_re);
  REQUIRE(it != std::sregex_iterator());
  const std::string d = (*it)[1];
  const std::regex pt_re("[ML]([0-9.]+) ([0-9.]+)");
  std::set<std::string> ys;
  for (auto p = std::sregex_iterator(d.begin(), d.end(), pt_re); p != std::sregex_iterator(); ++p)
    ys.insert((*p)[2]);
  CHECK(ys.size() == 1);
}

TEST_CASE("decimation keeps extremes") {
  std::vector<svg::Point> pts;
  for (int i = 0; i < 100000; ++i) pts.push_back({i * 1e-5, i == 51234 ? 9.0 : 0.0});
  const auto kept = svg::decimate(pts, 0.0, 1.0, 700);
  CHECK(kept.size() <= 4 * 700);
  bool spike = false;
  for (const auto& p : kept) spike = spike || p.y == 9.0;
  CHECK(spike);
  CHECK(kept.front().x == 0.0);
  CHECK(kept.back().x == pts.back().x);
  for (std::size_t i = 1; i < kept.size(); ++i) CHECK(kept[i].x > kept[i - 1].x);
}

TEST_CASE("stability region grid") {
  const damping::ChebyshevParams c5{5, 1.0, 1.0};
  const auto g = svg::region_grid(c5, 600, 401);
  CHECK(g.x_min == -55.0);
  CHECK(g.x_max == 1.0);
  // On the real axis row the stable set spans [-2 m^2, 0] up to grid spacing.
  const int mid = 200;
  CHECK(g.y(mid) == doctest::Approx(0.0).epsilon(1e-12));
  const double dx = (g.x_max - g.x_min) / (g.nx - 1);
  double left = 1e9;
  double right = -1e9;
  for (int i = 0; i < g.nx; ++i) {
    if (g.at(i, mid) <= 0.0) {
      left = std::min(left, g.x(i));
      right = std::max(right, g.x(i));
    }
  }
  CHECK(left >= -50.0 - dx);
  CHECK(left <= -50.0 + dx);
  CHECK(right <= dx);
  CHECK(right >= -dx);
  CHECK_FALSE(svg::contour_segments(g).empty());

  const auto text = svg::region_plot(damping::DyadicParams{3, 1, 1.0}, "dyadic 3,1");
  CHECK(count_of(text, "class=\"contour\"") == 1);
  CHECK_THROWS(svg::region_grid(damping::SimpleDampingParams{}));
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "stabex_harness_test";
  std::filesystem::remove_all(dir);
  RunRecord r;
  r.problem = "flat";
  r.trajectory = constant_trajectory();
  emit_trajectory_csv(r, dir / "flat.csv");
  emit_plots(r, dir / "flat.svg");
  std::ifstream in(dir / "flat.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_trajectory_csv(ss.str()) == trajectory_rows(r.trajectory));
  CHECK(std::filesystem::file_size(dir / "flat.svg") > 0);
  std::filesystem::remove_all(dir);
}
