// SPDX-License-Identifier: MIT
#include "wba/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wba/accum.hpp"
#include "parallel.hpp"

namespace wba {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStreamMul = 0xd1342543de82ef95ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr double kSqrt3 = 1.7320508075688772;

void validate_sampler(const WeightedSumSampler& s) {
  if (s.n_terms < 2)
    throw std::invalid_argument("sampler: n_terms must be >= 2");
  if (s.distribution == Distribution::StudentT && s.student_df < 1)
    throw std::invalid_argument("sampler: StudentT needs df >= 1");
  if (s.distribution == Distribution::Custom && !s.custom_quantile)
    throw std::invalid_argument("sampler: Custom needs a quantile function");
}

// Draws per sample index; StudentT consumes df + 1 underlying uniforms.
std::uint64_t sample_stride(const WeightedSumSampler& s) {
  return s.distribution == Distribution::StudentT
             ? static_cast<std::uint64_t>(s.student_df) + 1
             : 1;
}

double sample_value(const WeightedSumSampler& s, const CounterRng& rng,
                    std::uint64_t index) {
  const std::uint64_t base = index * sample_stride(s);
  switch (s.distribution) {
    case Distribution::StdGaussian:
      return inverse_normal_cdf(rng.uniform01(base));
    case Distribution::UniformSym:
      return (2.0 * rng.uniform01(base) - 1.0) * kSqrt3;
    case Distribution::Rademacher:
      return rng.uniform01(base) < 0.5 ? -1.0 : 1.0;
    case Distribution::StudentT: {
      const double z = inverse_normal_cdf(rng.uniform01(base));
      Accumulator chi2;
      for (int i = 1; i <= s.student_df; ++i) {
        const double zi = inverse_normal_cdf(rng.uniform01(base + i));
        chi2.add(zi * zi);
      }
      return z / std::sqrt(chi2.value() / static_cast<double>(s.student_df));
    }
    case Distribution::Custom:
      return s.custom_quantile(rng.uniform01(base));
  }
  throw std::logic_error("sample_value: unknown distribution");
}

bool has_mean(const WeightedSumSampler& s) {
  return !(s.distribution == Distribution::StudentT && s.student_df < 2);
}

double mean_of(const WeightedSumSampler& s) {
  return s.distribution == Distribution::Custom ? s.custom_mean : 0.0;
}

// theta_n^2 = w(n/N)/A_N for n = 1..N; w(0) = 0 aligns this with the
// averaging engine's 0..N-1 range.
std::vector<double> theta_squared(const WeightSpec& spec, std::int64_t n) {
  const double a = normalizer(spec, n);
  std::vector<double> th2(static_cast<std::size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(n);
    th2[static_cast<std::size_t>(k - 1)] = eval_weight(spec, x) / a;
  }
  return th2;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) + stream * kStreamMul)) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix64(key_ + counter * kGolden);
}

double CounterRng::uniform01(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

// Algorithm AS 241, PPND16 (Wichura 1988): rational minimax approximations
// on a central interval and two tail regimes.
double inverse_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("inverse_normal_cdf: u must lie in (0,1)");
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) *
                 r +
             4.5921953931549871457e4) *
                r +
            1.3731693765509461125e4) *
               r +
           1.9715909503065514427e3) *
              r +
          1.3314166789178437745e2) *
             r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double val = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    val = num / den;
  }
  return (q < 0.0) ? -val : val;
}

ThetaMoments theta_moments(const WeightSpec& spec, std::int64_t n_terms) {
  if (n_terms < 3)
    throw std::invalid_argument("theta_moments: need n_terms >= 3");
  const std::vector<double> th2 = theta_squared(spec, n_terms);
  Accumulator s2, s4;
  for (const double t : th2) {
    s2.add(t);
    s4.add(t * t);
  }
  return {s2.value(), s4.value()};
}

CltResult weighted_clt_distance(const WeightedSumSampler& sampler,
                                std::int64_t trials, int threads) {
  validate_sampler(sampler);
  if (trials < 1000)
    throw std::invalid_argument(
        "weighted_clt_distance: trials < 1000 is too noisy to bound");

  const std::vector<double> th2 = theta_squared(sampler.spec, sampler.n_terms);
  std::vector<double> theta(th2.size());
  for (std::size_t i = 0; i < th2.size(); ++i) theta[i] = std::sqrt(th2[i]);

  std::vector<double> sums(static_cast<std::size_t>(trials));
  detail::parallel_for(
      static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const CounterRng rng(sampler.seed, static_cast<std::uint64_t>(t));
        Accumulator acc;
        for (std::size_t k = 0; k < theta.size(); ++k) {
          if (theta[k] == 0.0) continue;
          acc.add(theta[k] * sample_value(sampler, rng, k));
        }
        sums[t] = acc.value();
      });

  std::sort(sums.begin(), sums.end());
  double dist = 0.0;
  const double inv = 1.0 / static_cast<double>(trials);
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double f = normal_cdf(sums[i]);
    dist = std::max(dist, f - static_cast<double>(i) * inv);
    dist = std::max(dist, static_cast<double>(i + 1) * inv - f);
  }

  CltResult out;
  out.distance = dist;
  // One-sided DKW-style bound without the factor 2 in the exponent,
  // sqrt(log(2/alpha)/trials) at alpha = 0.05; deliberately conservative.
  out.dkw_bound = std::sqrt(std::log(2.0 / 0.05) / static_cast<double>(trials));
  out.trials = trials;
  out.outside_hypothesis =
      !(sampler.distribution == Distribution::StdGaussian ||
        sampler.distribution == Distribution::UniformSym);
  return out;
}

std::vector<SllnPoint> weighted_slln_trajectory(
    const WeightedSumSampler& sampler, double mu,
    const std::vector<std::int64_t>& n_grid) {
  validate_sampler(sampler);
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("weighted_slln_trajectory: mu must be > 0");
  if (sampler.distribution == Distribution::StudentT &&
      mu >= static_cast<double>(sampler.student_df))
    throw std::invalid_argument(
        "weighted_slln_trajectory: StudentT(df) lacks finite moments of "
        "order >= df");
  if (n_grid.empty())
    throw std::invalid_argument("weighted_slln_trajectory: empty grid");
  for (const std::int64_t n : n_grid)
    if (n < 2)
      throw std::invalid_argument("weighted_slln_trajectory: grid entry < 2");

  const double sigma = (mu >= 2.0) ? 1.0 / mu + 0.5 : 1.0 / mu + 1.0;
  const CounterRng rng(sampler.seed, 0);  // one realization for the whole grid

  std::vector<SllnPoint> out;
  out.reserve(n_grid.size());
  for (const std::int64_t n : n_grid) {
    Accumulator acc;
    for (std::int64_t k = 1; k <= n; ++k) {
      const double w = eval_weight(
          sampler.spec, static_cast<double>(k) / static_cast<double>(n));
      if (w == 0.0) continue;
      acc.add(std::sqrt(w) *
              sample_value(sampler, rng, static_cast<std::uint64_t>(k - 1)));
    }
    const double sum = acc.value();
    SllnPoint pt;
    pt.n = n;
    pt.scaled = sum / std::pow(static_cast<double>(n), sigma);
    pt.single_log_scaled =
        sum / std::sqrt(static_cast<double>(n) *
                        std::log(static_cast<double>(n)));
    out.push_back(pt);
  }
  return out;
}

LlnResult weighted_lln_check(const WeightedSumSampler& sampler, double epsilon,
                             std::int64_t trials, int threads) {
  validate_sampler(sampler);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("weighted_lln_check: epsilon must be > 0");
  if (trials < 1000)
    throw std::invalid_argument(
        "weighted_lln_check: trials < 1000 is too noisy to bound");

  const std::vector<double> th2 = theta_squared(sampler.spec, sampler.n_terms);
  LlnResult out;
  out.hypotheses_violated = !has_mean(sampler);
  const double mean = has_mean(sampler) ? mean_of(sampler) : 0.0;

  std::vector<unsigned char> hit(static_cast<std::size_t>(trials), 0);
  detail::parallel_for(
      static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const CounterRng rng(sampler.seed, static_cast<std::uint64_t>(t));
        Accumulator acc;
        for (std::size_t k = 0; k < th2.size(); ++k) {
          if (th2[k] == 0.0) continue;
          acc.add(th2[k] * sample_value(sampler, rng, k));
        }
        hit[t] = std::fabs(acc.value() - mean) < epsilon ? 1 : 0;
      });

  std::int64_t count = 0;
  for (const unsigned char h : hit) count += h;
  out.probability = static_cast<double>(count) / static_cast<double>(trials);
  return out;
}

}  // namespace wba
