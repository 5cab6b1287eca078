// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

#include "wba/dynamics.hpp"
#include "wba/weights.hpp"

// The averaging engine: weighted and unweighted Birkhoff averages, error
// curves against a known reference, and the sparse-spike sequence showing
// that the converse of limit preservation fails.

namespace wba {

enum class Precision { Standard, Extended };

// Reported errors clip at the precision floor instead of reporting rounding
// noise; the extended (double-double) pipeline pushes the floor from 1e-14
// down to 1e-28.
inline constexpr double kStandardFloor = 1e-14;
inline constexpr double kExtendedFloor = 1e-28;

inline constexpr double precision_floor(Precision p) {
  return p == Precision::Extended ? kExtendedFloor : kStandardFloor;
}

struct ErrorCurve {
  std::vector<std::int64_t> n_grid;  // strictly increasing
  std::vector<double> errors;        // l-inf distance to the reference
  std::vector<double> reference;
  std::vector<bool> floor_flag;      // error below the precision floor
  double floor = kStandardFloor;
};

// (1/A_N) sum_{n=0}^{N-1} w(n/N) f_n, compensated, ascending index order.
std::vector<double> weighted_average(const SignalSource& signal,
                                     const WeightSpec& spec, std::int64_t n_steps,
                                     Precision precision = Precision::Standard);

// Same sum without collapsing to double, for error measurements near the
// extended floor.
std::vector<dd> weighted_average_dd(const SignalSource& signal,
                                    const WeightSpec& spec, std::int64_t n_steps);

// Plain mean of the first N samples.
std::vector<double> unweighted_average(const SignalSource& signal,
                                       std::int64_t n_steps);

struct ContinuousAverage {
  std::vector<double> value;
  // Richardson estimate |I_h - I_2h| / 3 of the midpoint quadrature error,
  // reported separately from any convergence-rate claim.
  double quad_error_estimate = 0.0;
};

// (1/N) integral_0^N w(s/N) f(s) ds by composite midpoint with step ~h
// (h is snapped so an integer number of cells covers [0, N]).
ContinuousAverage weighted_average_continuous(const FlowSampler& flow,
                                              const WeightSpec& spec,
                                              double horizon, double step);

// Per-N l-inf error against the reference; each N is recomputed from scratch
// (A_N changes with N) and grid points run in parallel.
ErrorCurve error_curve(const SignalSource& signal, const WeightSpec& spec,
                       const std::vector<std::int64_t>& n_grid,
                       const std::vector<double>& reference,
                       Precision precision = Precision::Standard,
                       int threads = 0);

struct ToeplitzResult {
  double weighted = 0.0;
  double unweighted = 0.0;
};

// a_n = n b_n - (n-1) b_{n-1} with b_n = 1 exactly at powers of ten: Cesaro
// means converge to 0, yet the plain average at N = 10^i + 1 is ~1 while the
// weighted average stays near 0.
ToeplitzResult toeplitz_counterexample(std::int64_t n_steps);

}  // namespace wba
