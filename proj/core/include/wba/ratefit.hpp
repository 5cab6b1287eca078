// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wba/averaging.hpp"

// Convergence-model fitting for measured error curves, orbit classification
// from the self-difference proxy, and the explicit constant in front of the
// N^-m error bound.

namespace wba {

enum class RateModel { Exponential, Polynomial, LinExpOverLog, Inconclusive };

struct RateFit {
  RateModel model = RateModel::Inconclusive;
  double c = 0.0;     // decay constant: err ~ C exp(-c N^zeta) or C exp(-c N/log N)
  double zeta = 0.0;  // stretch exponent of the exponential model
  double m = 0.0;     // order of the polynomial model: err ~ C N^-m
  double log_c0 = 0.0;  // fitted intercept log C
  double r_squared = 0.0;
  std::pair<std::int64_t, std::int64_t> n_range_used{0, 0};
  bool floor_truncated = false;  // floor-flagged points were dropped
  std::string note;              // reason when Inconclusive
};

// Exponential candidate: scan zeta over {0.05, 0.06, ..., 1.00}, regress
// log(err) on N^zeta, keep the zeta with the best r^2 among negative slopes.
// Polynomial candidate: regress log(err) on log N. The better r^2 wins;
// Inconclusive iff both fall below 0.9. Only points above the floor enter,
// and at least 5 of them are required.
RateFit fit_rate(const ErrorCurve& curve);

// Same, but when the spec is the double-exponential weight a third candidate
// log(err) ~ log C - c N / log N joins the contest (its expected rate).
RateFit fit_rate(const ErrorCurve& curve, const WeightSpec& spec);

enum class OrbitClass { Regular, Chaotic, Indeterminate };

struct ClassifyResult {
  OrbitClass verdict = OrbitClass::Indeterminate;
  RateFit evidence;
  ErrorCurve proxy;  // |WB_2N - WB_N| per grid N
};

// Classifies with no reference value: exponential decay of the proxy (or
// polynomial order >= 1.5) reads Regular, polynomial order in [0.3, 0.7]
// reads Chaotic (the N^-1/2 signature of i.i.d.-like signals).
ClassifyResult classify_orbit(const SignalSource& signal, const WeightSpec& spec,
                              const std::vector<std::int64_t>& n_grid);

// C1*C2*C3*C4 where C1 = sup_{2<=N<=1e4} N/A_N, C2 = ||D^m w||_L1,
// C3 = (2 pi gamma)^-m and C4 = sum_{k != 0} |f_k| * ||k||_l1^(tau m).
// The product multiplies N^-m in the error bound. Requires integer m >= 2.
double theoretical_bound(const WeightSpec& spec, int m, double gamma, double tau,
                         const std::map<std::vector<int>, double>& fourier_decay);

}  // namespace wba
