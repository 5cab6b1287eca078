// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wba/weights.hpp"

// Monte Carlo checks of the probabilistic limit theorems for weighted sums:
// law of large numbers, Marcinkiewicz-Zygmund strong laws, and the
// Kolmogorov-distance rate of the weighted central limit theorem.

namespace wba {

// Counter-based generator: every draw is addressed by (seed, stream,
// counter), so trials parallelize with independent streams and any draw can
// be regenerated without replaying the sequence.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform in the open interval (0,1); 0 and 1 cannot occur.
  double uniform01(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

// Inverse of the standard normal CDF (Wichura's PPND16), |error| ~ 1e-16.
double inverse_normal_cdf(double u);

// Standard normal CDF via erfc, accurate in both tails.
double normal_cdf(double x);

enum class Distribution {
  StdGaussian,
  UniformSym,  // uniform on [-sqrt(3), sqrt(3)], unit variance
  Rademacher,  // +-1 equiprobable
  StudentT,    // ratio of a normal to a chi of student_df normals
  Custom,      // user quantile function on (0,1)
};

struct WeightedSumSampler {
  Distribution distribution = Distribution::StdGaussian;
  int student_df = 1;
  std::function<double(double)> custom_quantile;
  double custom_mean = 0.0;  // E X for Custom draws, used for centering
  WeightSpec spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  std::int64_t n_terms = 100;
  std::uint64_t seed = 0;
};

struct ThetaMoments {
  double sum_sq = 0.0;      // sum of theta_n^2, identically 1 by construction
  double sum_fourth = 0.0;  // sum of theta_n^4, ~ (1/N) integral of w^2
};

// theta_n = sqrt(w(n/N) / A_N) for n = 1..N. Requires N >= 3.
ThetaMoments theta_moments(const WeightSpec& spec, std::int64_t n_terms);

struct CltResult {
  double distance = 0.0;   // Kolmogorov distance of sum theta_n X_n to Phi
  double dkw_bound = 0.0;  // sampling-noise bound at 95% confidence
  std::int64_t trials = 0;
  // Distribution outside the theorem's log-concave unconditional regime
  // (anything but StdGaussian / UniformSym); reported, not rejected.
  bool outside_hypothesis = false;
};

CltResult weighted_clt_distance(const WeightedSumSampler& sampler,
                                std::int64_t trials, int threads = 0);

struct SllnPoint {
  std::int64_t n = 0;
  double scaled = 0.0;  // N^{-sigma} sum sqrt(w(n/N)) X_n
  double single_log_scaled = 0.0;  // (N log N)^{-1/2} scaling of the same sum
};

// One realization (the stream is fixed by the seed; X_n is shared across
// grid entries) of the scaled weighted sums. sigma = 1/mu + 1/2 for mu >= 2,
// 1/mu + 1 for 0 < mu < 2.
std::vector<SllnPoint> weighted_slln_trajectory(
    const WeightedSumSampler& sampler, double mu,
    const std::vector<std::int64_t>& n_grid);

struct LlnResult {
  double probability = 0.0;  // empirical P(|weighted mean - E X| < epsilon)
  bool hypotheses_violated = false;  // e.g. StudentT(1) has no mean
};

LlnResult weighted_lln_check(const WeightedSumSampler& sampler, double epsilon,
                             std::int64_t trials, int threads = 0);

}  // namespace wba
