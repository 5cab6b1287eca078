// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>

#include "wba/accum.hpp"

// Weighting functions on [0,1] used by the averaging engine.
//
// The bump family is exp(-x^-p (1-x)^-q) on (0,1) and identically zero
// outside; the double-exponential variant is exp(-exp(1/x) - exp(1/(1-x))).
// Both are normalized to unit integral. Evaluation runs in log space with a
// hard flush to exact zero once the exponent drops below kWeightLogFlush, so
// compact support holds bit-for-bit.
//
// Error conventions here and in the rest of the library: bad parameters throw
// std::invalid_argument, bad runtime inputs throw std::domain_error, numeric
// failures throw std::runtime_error.

namespace wba {

enum class WeightKind { BumpPQ, DoubleExp, SineSquared, Uniform, Custom };

struct WeightSpec {
  WeightKind kind = WeightKind::BumpPQ;
  double p = 1.0;  // BumpPQ left exponent
  double q = 1.0;  // BumpPQ right exponent
  // Integral over [0,1] of the unnormalized profile; 0 means "not computed
  // yet" and evaluation will fill it from an internal per-(kind,p,q) cache.
  double z_integral = 0.0;
  // Custom kind only: unnormalized profile, must be >= 0 and finite on [0,1].
  std::function<double(double)> custom_eval;
};

// exp argument below which the weight is flushed to exact zero.
inline constexpr double kWeightLogFlush = -745.0;

WeightSpec make_weight(WeightKind kind, double p = 1.0, double q = 1.0);
WeightSpec make_custom_weight(std::function<double(double)> unnormalized);

// Normalized weight value at x. Zero outside [0,1] for every kind.
double eval_weight(const WeightSpec& spec, double x);

// Double-double evaluation path. The profile itself carries full
// double-double accuracy; the normalization constant is known only to double
// precision, which cancels in every ratio the library forms (all averages
// divide by the matching normalizer).
dd eval_weight_dd(const WeightSpec& spec, dd x);

// A_N = sum_{n=0}^{N-1} eval(n/N), compensated, ascending index order.
double normalizer(const WeightSpec& spec, std::int64_t n_steps);
dd normalizer_dd(const WeightSpec& spec, std::int64_t n_steps);

// Integral over [0,1] of the unnormalized profile (the z_integral value),
// computed by adaptive Gauss-Kronrod quadrature and cached.
double unnormalized_integral(const WeightSpec& spec);

// Integral of the square of the normalized weight.
double square_integral(const WeightSpec& spec);

// L1 norm of the m-th derivative of the normalized weight. Exact-derivative
// recurrence for the exp(g) composition, integrated by composite Simpson.
// Diagnostic precision: relative 1e-6 for m <= 10, best effort above.
double derivative_l1_norm(const WeightSpec& spec, int order);

}  // namespace wba
