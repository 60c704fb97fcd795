#include "stabex/damping.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace stabex::damping {

namespace {

constexpr double kStabilitySlack = 1e-9;
constexpr int kGridPoints = 10000;

double pow2(int e) { return std::ldexp(1.0, e); }

std::complex<double> ipow(std::complex<double> base, long long e) {
  std::complex<double> result{1.0, 0.0};
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

// Golden-section search for the maximum of a unimodal g on [a, b].
template <typename F>
double golden_max(F&& g, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return std::max({gc, gd, g(0.5 * (a + b))});
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::simple:
      return "simple";
    case Method::dyadic:
      return "dyadic";
    case Method::chebyshev:
      return "chebyshev";
  }
  return "simple";
}

Method method_from_string(const std::string& text) {
  if (text == "simple") return Method::simple;
  if (text == "dyadic") return Method::dyadic;
  if (text == "chebyshev") return Method::chebyshev;
  throw std::invalid_argument("unknown damping method: " + text);
}

void SimpleDampingParams::validate() const {
  if (!(big_step > 0.0) || !(small_step > 0.0) || !(small_step < big_step))
    throw std::invalid_argument("simple damping: need 0 < k < K");
  if (num_small < 0) throw std::invalid_argument("simple damping: m must be >= 0");
  if (!(damping_constant > 0.0 && damping_constant < 2.0))
    throw std::invalid_argument("simple damping: c must lie in (0, 2)");
}

void ChebyshevParams::validate() const {
  if (degree < 1) throw std::invalid_argument("chebyshev damping: degree must be >= 1");
  if (!(spectral_bound > 0.0)) throw std::invalid_argument("chebyshev damping: lambda_N must be > 0");
  if (!(max_step > 0.0)) throw std::invalid_argument("chebyshev damping: K must be > 0");
}

void DyadicParams::validate() const {
  if (levels < 0 || multiple_levels < 0 || multiple_levels > levels)
    throw std::invalid_argument("dyadic damping: need 0 <= q <= p");
  if (!(spectral_bound > 0.0)) throw std::invalid_argument("dyadic damping: lambda_N must be > 0");
}

double DampingSequence::total_time() const {
  return std::accumulate(steps.begin(), steps.end(), 0.0);
}

double DampingSequence::cost() const {
  const double total = total_time();
  return total > 0.0 ? static_cast<double>(steps.size()) / total : 0.0;
}

int min_damping_steps(double big_step_lambda, double c) {
  if (!(c > 0.0 && c < 2.0)) throw std::domain_error("min_damping_steps: c must lie in (0, 2)");
  if (!(big_step_lambda > 0.0)) throw std::domain_error("min_damping_steps: K lambda must be > 0");
  if (big_step_lambda <= 2.0) return 0;

  const double growth = big_step_lambda - 1.0;
  const double contraction = std::abs(1.0 - c);
  if (contraction == 0.0) return 1;

  int m = static_cast<int>(std::ceil(std::log(growth) / -std::log(contraction)));
  m = std::max(m, 1);
  // The closed form can be off by one in floating point.
  while (m > 1 && std::pow(contraction, m - 1) * growth <= 1.0) --m;
  while (std::pow(contraction, m) * growth > 1.0) ++m;
  return m;
}

double eval_simple_poly(double x, const SimpleDampingParams& params) {
  return std::pow(1.0 - params.theta() * x, params.num_small) * (1.0 - x);
}

double chebyshev_zero(int m, int i) {
  return std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * m));
}

DampingSequence chebyshev_sequence(double spectral_bound, int m) {
  if (!(spectral_bound > 0.0) || m < 1)
    throw std::invalid_argument("chebyshev_sequence: need lambda_N > 0 and m >= 1");
  DampingSequence seq;
  seq.method = Method::chebyshev;
  seq.steps.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const double s = chebyshev_zero(m, m + 1 - i);
    seq.steps.push_back(2.0 / (spectral_bound * (1.0 - s)));
  }
  seq.params = ChebyshevParams{m, spectral_bound, seq.steps.back()};
  return seq;
}

int chebyshev_degree(double big_step_lambda) {
  const auto m = std::lround(std::numbers::pi / 4.0 * std::sqrt(big_step_lambda));
  return static_cast<int>(std::max(1L, m));
}

double chebyshev_t(int m, double s) {
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = s;
  for (int k = 1; k < m; ++k) {
    const double next = 2.0 * s * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double eval_chebyshev_poly(double x, const ChebyshevParams& params) {
  const double scale = params.max_step * params.spectral_bound;
  return chebyshev_t(params.degree, 1.0 - 2.0 * x / scale);
}

double dyadic_poly_scaled(double y, int p, int q) {
  double value = 1.0;
  for (int j = q + 1; j <= p; ++j) value *= 1.0 - pow2(j) * y;
  for (int i = 0; i <= q; ++i) value *= std::pow(1.0 - pow2(i) * y, pow2(q - i));
  return value;
}

double eval_dyadic_poly(double x, const DyadicParams& params) {
  return dyadic_poly_scaled(x / pow2(params.levels), params.levels, params.multiple_levels);
}

double dyadic_max_abs(int p, int q) {
  auto abs_poly = [p, q](double y) { return std::abs(dyadic_poly_scaled(y, p, q)); };

  double worst = 0.0;
  for (int n = 0; n <= kGridPoints; ++n) {
    worst = std::max(worst, abs_poly(static_cast<double>(n) / kGridPoints));
  }
  // Distinct roots are y = 2^-j, j = 0..p; one critical point between each pair.
  for (int j = 0; j < p; ++j) {
    worst = std::max(worst, golden_max(abs_poly, pow2(-j - 1), pow2(-j)));
  }
  return worst;
}

int min_q_for_p(int p) {
  if (p < 0) throw std::invalid_argument("min_q_for_p: p must be >= 0");
  // The scan is deterministic; memoize it for the controller's repeated bursts.
  static std::mutex mutex;
  static std::map<int, int> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(p); it != cache.end()) return it->second;
  }
  int result = p;
  for (int q = 0; q <= p; ++q) {
    if (dyadic_max_abs(p, q) <= 1.0 + kStabilitySlack) {
      result = q;
      break;
    }
  }
  std::lock_guard lock(mutex);
  cache.emplace(p, result);
  return result;
}

std::vector<double> dyadic_steps(int p, int q, double smallest_step) {
  if (q < 0 || q > p) throw std::invalid_argument("dyadic_steps: need 0 <= q <= p");
  std::vector<double> steps;
  steps.reserve(static_cast<std::size_t>(dyadic_step_count(p, q)));
  for (int i = 0; i <= q; ++i) {
    const auto copies = static_cast<long long>(pow2(q - i));
    steps.insert(steps.end(), static_cast<std::size_t>(copies), pow2(i) * smallest_step);
  }
  for (int j = q + 1; j <= p; ++j) steps.push_back(pow2(j) * smallest_step);
  return steps;
}

long long dyadic_step_count(int p, int q) { return ((2LL << q) - 1) + (p - q); }

DampingSequence dyadic_sequence(double spectral_bound, double max_step) {
  const double scale = spectral_bound * max_step;
  if (!(spectral_bound > 0.0) || !(scale >= 1.0))
    throw std::invalid_argument("dyadic_sequence: need K lambda_N >= 1");
  const int p = static_cast<int>(std::lround(std::log2(scale)));
  const int q = min_q_for_p(p);
  DampingSequence seq;
  seq.method = Method::dyadic;
  seq.steps = dyadic_steps(p, q, 1.0 / spectral_bound);
  seq.params = DyadicParams{p, q, spectral_bound};
  return seq;
}

std::complex<double> eval_region_poly(std::complex<double> z, const DampingSequence& seq) {
  const double total = seq.total_time();
  std::complex<double> value{1.0, 0.0};
  if (total <= 0.0) return value;
  for (double k : seq.steps) value *= 1.0 + (k / total) * z;
  return value;
}

std::complex<double> eval_region_poly(std::complex<double> z, const ChebyshevParams& params) {
  const int m = params.degree;
  const double m2 = static_cast<double>(m) * m;
  std::complex<double> value{1.0, 0.0};
  for (int i = 1; i <= m; ++i) value *= 1.0 + (z / m2) / (1.0 - chebyshev_zero(m, i));
  return value;
}

std::complex<double> eval_region_poly(std::complex<double> z, const DyadicParams& params) {
  const int p = params.levels;
  const int q = params.multiple_levels;
  const double denom = pow2(q) * (q + 1) + pow2(p + 1) - pow2(q + 1);
  std::complex<double> value{1.0, 0.0};
  for (int j = q + 1; j <= p; ++j) value *= 1.0 + (pow2(j) / denom) * z;
  for (int i = 0; i <= q; ++i) {
    value *= ipow(1.0 + (pow2(i) / denom) * z, static_cast<long long>(pow2(q - i)));
  }
  return value;
}

double region_real_extent(const Params& params) {
  if (const auto* cheb = std::get_if<ChebyshevParams>(&params)) {
    return 2.0 * cheb->degree * cheb->degree;
  }
  if (const auto* dy = std::get_if<DyadicParams>(&params)) {
    const int p = dy->levels;
    const int q = dy->multiple_levels;
    return pow2(q) * (q + 1) + pow2(p + 1) - pow2(q + 1);
  }
  throw std::invalid_argument("region_real_extent: only chebyshev and dyadic are supported");
}

}  // namespace stabex::damping
