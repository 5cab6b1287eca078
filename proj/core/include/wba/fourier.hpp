// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/dynamics.hpp"
#include "wba/weights.hpp"

// Fourier-coefficient extraction from orbit data by weighted averaging
// against rotation phases, plus the effective-order budget that bounds which
// mode norms retain the exponential rate at a given N.

namespace wba {

// Modes with |s|_l1 >= safety * budget are flagged beyond-effective. The
// asymptotic budget carries no constant, so flagging is conservative and
// estimates are always reported in full.
inline constexpr double kEffectiveOrderSafety = 0.5;

struct FourierRequest {
  std::vector<double> orbit;  // row-major, n_points() x point_dim
  int point_dim = 1;
  Rotation rho;
  std::vector<double> theta0;
  WeightSpec spec;
  // Optional explicit mode list for fourier_spectrum; empty means "all modes
  // with |s|_l1 <= max_l1_order".
  std::vector<std::vector<int>> modes;

  std::int64_t n_points() const {
    return point_dim > 0
               ? static_cast<std::int64_t>(orbit.size()) / point_dim
               : 0;
  }
};

// exp(-2 pi i <s, theta0>) * (1/A_N) sum_n w(n/N) p_n exp(-2 pi i n <s, rho>),
// one complex entry per orbit dimension. The s = 0 result reproduces
// weighted_average bit for bit: the phase factors are then exactly 1 and the
// summation path is shared.
std::vector<std::complex<double>> weighted_fourier_coeff(
    const FourierRequest& req, const std::vector<int>& s,
    Precision precision = Precision::Standard);

// Budget N^zeta for mode norms at sample count N. Admissibility of zeta is
// decided in exact rational arithmetic on the values of the doubles:
// 0 < zeta < min(p,q) / ((d+1) min(p,q) + 1). BumpPQ weights only.
double effective_order_budget(std::int64_t n_steps, int d,
                              const WeightSpec& spec, double zeta);

// Truncated sequence-space variant: budget (log N)^{zeta7} with
// 2 <= zeta7 < 1 + eta.
double effective_order_budget_log(std::int64_t n_steps, double eta,
                                  double zeta7);

struct FourierModeResult {
  std::vector<int> s;
  std::vector<std::complex<double>> coeff;
  bool beyond_effective = false;
  // Magnitude of the mode's projection onto the orbit-minus-reconstruction
  // misfit on the diagnostic stride; near zero when the mode is fully
  // explained by its estimate.
  double residual = 0.0;
};

struct FourierResult {
  std::vector<FourierModeResult> modes;
  std::int64_t n_used = 0;
  double budget = 0.0;
  double zeta_used = 0.0;
  // RMS misfit between the orbit and its reconstruction from the estimated
  // coefficients, sampled on every 97th index. Diagnostic only; estimation
  // uses all indices.
  double reconstruction_residual = 0.0;
};

// Batch extraction of all modes with |s|_l1 <= max_l1_order (or the explicit
// req.modes list). zeta = 0 picks half the admissible supremum. Weight kinds
// without a budget theory (anything but BumpPQ) get an infinite budget and
// no beyond-effective flags; passing an explicit zeta for them is an error.
FourierResult fourier_spectrum(const FourierRequest& req, int max_l1_order,
                               Precision precision = Precision::Standard,
                               int threads = 0, double zeta = 0.0);

}  // namespace wba
