// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/ratefit.hpp"
#include "wba/weights.hpp"

// Exact trigonometric interpolation of T-periodic data by orthogonal
// projection, and the single-mode kernel whose smallness makes weighted
// averages of periodic data converge exponentially.

namespace wba {

struct TrigInterp {
  int period = 0;
  double a0 = 0.0;
  std::vector<double> cos_coeffs;  // a_1 .. a_M
  std::vector<double> sin_coeffs;  // b_1 .. b_M (even T: b_1 .. b_{M-1})
  // M = T/2 for even T, (T-1)/2 for odd.
  int mode_count() const { return period / 2; }
  double eval(std::int64_t n) const;
};

// Coefficients by projection onto the orthogonal cos/sin basis (O(T^2), no
// dense solve). a0 always equals the data mean.
TrigInterp trig_interpolate(const std::vector<double>& values);

struct PeriodicErrorResult {
  TrigInterp interp;
  ErrorCurve curve;  // weighted-average error against interp.a0
  RateFit fit;
};

PeriodicErrorResult periodic_weighted_error(
    const std::vector<double>& values, const WeightSpec& spec,
    const std::vector<std::int64_t>& n_grid,
    Precision precision = Precision::Standard);

struct ModeSum {
  double magnitude = 0.0;
  bool zero_mode = false;  // k = 0 returns 1 by convention, flagged here
};

// |(1/A_N) sum_n w(n/N) exp(2 pi i k n / T)|. Requires |k/T| <= 1/2.
ModeSum mode_sum_smallness(int k, int period, const WeightSpec& spec,
                           std::int64_t n_steps,
                           Precision precision = Precision::Standard);

}  // namespace wba
