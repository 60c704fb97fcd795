#pragma once

// Stabilizing step-size sequences and their stability polynomials.
//
// A sequence of explicit Euler steps k_1, ..., k_m applied to the mode
// u' = -lambda u multiplies it by prod_i (1 - k_i lambda). Written in terms of
// x = K lambda for a reference step K this is a polynomial P(x) with P(0) = 1;
// the sequence is stable for the mode when |P(x)| <= 1.

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace stabex::damping {

enum class Method { simple, dyadic, chebyshev };

const char* to_string(Method method);
Method method_from_string(const std::string& text);

/// One large step K followed by m small steps k, with c = k lambda.
struct SimpleDampingParams {
  double big_step = 1.0;
  double small_step = 0.5;
  int num_small = 0;
  double damping_constant = 0.5;

  [[nodiscard]] double theta() const { return small_step / big_step; }
  void validate() const;
};

struct ChebyshevParams {
  int degree = 1;
  double spectral_bound = 1.0;  // lambda_N
  double max_step = 1.0;        // K

  void validate() const;
};

/// Dyadic ramp: 2^(q-i) steps of size 2^i / lambda_N for i = 0..q, then a
/// single step of size 2^j / lambda_N for j = q+1..p.
struct DyadicParams {
  int levels = 0;           // p
  int multiple_levels = 0;  // q
  double spectral_bound = 1.0;

  void validate() const;
};

using Params = std::variant<SimpleDampingParams, ChebyshevParams, DyadicParams>;

struct DampingSequence {
  std::vector<double> steps;
  Method method = Method::simple;
  Params params;

  [[nodiscard]] double total_time() const;
  [[nodiscard]] std::size_t size() const { return steps.size(); }
  [[nodiscard]] bool empty() const { return steps.empty(); }
  /// Steps per unit time, m / (k_1 + ... + k_m).
  [[nodiscard]] double cost() const;
};

// -- simple (gap) damping ----------------------------------------------------

/// Smallest m with |1 - c|^m (K lambda - 1) <= 1; zero when K lambda <= 2.
/// Throws std::domain_error unless c lies in (0, 2).
int min_damping_steps(double big_step_lambda, double c);

/// (1 - theta x)^m (1 - x) with theta = k / K.
double eval_simple_poly(double x, const SimpleDampingParams& params);

// -- Chebyshev damping -------------------------------------------------------

/// i-th zero (1-based) of T_m.
double chebyshev_zero(int m, int i);

/// Steps k_i = 2 / (lambda_N (1 - s_{m+1-i})), i = 1..m, smallest first.
DampingSequence chebyshev_sequence(double spectral_bound, int m);

/// round(pi/4 sqrt(K lambda_N)), at least 1.
int chebyshev_degree(double big_step_lambda);

/// T_m(s) by the three-term recurrence; valid for |s| > 1 as well.
double chebyshev_t(int m, double s);

/// T_m(1 - 2x / (K lambda_N)).
double eval_chebyshev_poly(double x, const ChebyshevParams& params);

// -- dyadic damping ----------------------------------------------------------

/// The dyadic polynomial in y = x / (K lambda_N) in [0, 1]:
/// prod_{j=q+1}^p (1 - 2^j y) prod_{i=0}^q (1 - 2^i y)^(2^(q-i)).
double dyadic_poly_scaled(double y, int p, int q);

/// P_d(x) with K lambda_N = 2^p.
double eval_dyadic_poly(double x, const DyadicParams& params);

/// max |P_d| over [0, 2^p]: a uniform grid plus the unique extremum between
/// each pair of consecutive roots (|P_d| is unimodal there since all roots
/// are real).
double dyadic_max_abs(int p, int q);

/// Minimal q <= p with |P_d| <= 1 on [0, 2^p].
int min_q_for_p(int p);

/// Steps of the dyadic ramp with the given smallest step, ascending.
std::vector<double> dyadic_steps(int p, int q, double smallest_step);

/// Number of steps (2^(q+1) - 1) + (p - q).
long long dyadic_step_count(int p, int q);

/// p = round(log2(K lambda_N)), q = min_q_for_p(p); smallest step 1/lambda_N.
/// Requires K lambda_N >= 1.
DampingSequence dyadic_sequence(double spectral_bound, double max_step);

// -- complex stability regions -----------------------------------------------

/// Polynomial in z = -Kbar lambda, where Kbar is the sum of all steps:
/// prod_i (1 + (k_i / Kbar) z). Works for any damping sequence.
std::complex<double> eval_region_poly(std::complex<double> z, const DampingSequence& seq);

/// Region polynomial of the Chebyshev sequence of degree m.
std::complex<double> eval_region_poly(std::complex<double> z, const ChebyshevParams& params);

/// Region polynomial of the dyadic ramp (p, q), using
/// theta_i = 2^i / (2^q (q+1) + 2^(p+1) - 2^(q+1)).
std::complex<double> eval_region_poly(std::complex<double> z, const DyadicParams& params);

/// Length of the real stability interval in the z variable: 2 m^2 for
/// Chebyshev and 2^q (q+1) + 2^(p+1) - 2^(q+1) for the dyadic ramp.
double region_real_extent(const Params& params);

}  // namespace stabex::damping
