// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "wba/stochastic.hpp"
#include "wba/weights.hpp"

using namespace wba;

TEST_CASE("counter rng is addressable and stream-separated") {
  CounterRng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  for (std::uint64_t k : {0ULL, 1ULL, 17ULL, 1000000ULL}) {
    CHECK(a.bits(k) == b.bits(k));
    CHECK(a.bits(k) != c.bits(k));
    CHECK(a.bits(k) != d.bits(k));
  }
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const double u = a.uniform01(k);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal quantile and cdf invert each other") {
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  for (double u : {1e-10, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-8}) {
    const double x = inverse_normal_cdf(u);
    CHECK(normal_cdf(x) == doctest::Approx(u).epsilon(1e-12));
  }
  // tail magnitudes of the quantile itself
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054));
  CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::domain_error);
  CHECK_THROWS_AS(inverse_normal_cdf(-0.1), std::domain_error);
}

TEST_CASE("theta vectors are unit vectors for every weight") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> kind_d(0, 3);
  std::uniform_real_distribution<double> pq(0.5, 2.5);
  std::uniform_int_distribution<std::int64_t> nd(3, 50000);
  for (int i = 0; i < 20; ++i) {
    WeightSpec spec;
    switch (kind_d(rng)) {
      case 0:
        spec = make_weight(WeightKind::BumpPQ, pq(rng), pq(rng));
        break;
      case 1:
        spec = make_weight(WeightKind::DoubleExp);
        break;
      case 2:
        spec = make_weight(WeightKind::SineSquared);
        break;
      default:
        spec = make_weight(WeightKind::Uniform);
        break;
    }
    auto m = theta_moments(spec, nd(rng));
    CHECK(std::fabs(m.sum_sq - 1.0) <= 1e-12);
    CHECK(m.sum_fourth > 0.0);
  }
}

TEST_CASE("uniform weight fourth moment is exactly 1/N at dyadic N") {
  auto m = theta_moments(make_weight(WeightKind::Uniform), 1024);
  CHECK(m.sum_sq == 1.0);
  CHECK(m.sum_fourth == 1.0 / 1024.0);
}

TEST_CASE("fourth moment approaches the square integral over N") {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const std::int64_t n = 100000;
  auto m = theta_moments(spec, n);
  const double wsq = 1.9625411218154404688;  // integral of the squared weight
  CHECK(std::fabs(static_cast<double>(n) * m.sum_fourth - wsq) / wsq < 0.01);
}

TEST_CASE("theta moments validate the term count") {
  CHECK_THROWS_AS(theta_moments(make_weight(WeightKind::Uniform), 2),
                  std::invalid_argument);
}

TEST_CASE("gaussian inputs give an exactly normal weighted sum") {
  WeightedSumSampler s;
  s.distribution = Distribution::StdGaussian;
  s.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  s.n_terms = 100;
  s.seed = 12345;
  auto res = weighted_clt_distance(s, 100000);
  CHECK(res.distance <= res.dkw_bound);
  CHECK(res.dkw_bound ==
        doctest::Approx(std::sqrt(std::log(40.0) / 100000.0)).epsilon(1e-15));
  CHECK(res.trials == 100000);
  CHECK_FALSE(res.outside_hypothesis);
}

TEST_CASE("two rademacher terms under the flat weight hit a 0.25 plateau") {
  // sum is (X1 + X2)/sqrt(2): atoms -sqrt2, 0, sqrt2 with mass 1/4, 1/2, 1/4;
  // the Kolmogorov distance to the normal is exactly 1/4 at the origin
  WeightedSumSampler s;
  s.distribution = Distribution::Rademacher;
  s.spec = make_weight(WeightKind::Uniform);
  s.n_terms = 2;
  s.seed = 7;
  auto res = weighted_clt_distance(s, 20000);
  CHECK(std::fabs(res.distance - 0.25) < 0.02);
  CHECK(res.outside_hypothesis);
}

TEST_CASE("clt distance is deterministic and thread invariant") {
  WeightedSumSampler s;
  s.distribution = Distribution::UniformSym;
  s.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  s.n_terms = 50;
  s.seed = 1;
  auto a = weighted_clt_distance(s, 5000, 1);
  auto b = weighted_clt_distance(s, 5000, 4);
  auto c = weighted_clt_distance(s, 5000);
  CHECK(a.distance == b.distance);
  CHECK(a.distance == c.distance);
  s.seed = 2;
  auto d = weighted_clt_distance(s, 5000);
  CHECK(a.distance != d.distance);
}

TEST_CASE("clt distance shrinks with the term count") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    WeightedSumSampler s;
    s.distribution = Distribution::UniformSym;
    s.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
    s.seed = seed;
    s.n_terms = 50;
    auto d50 = weighted_clt_distance(s, 100000);
    s.n_terms = 400;
    auto d400 = weighted_clt_distance(s, 100000);
    CHECK_FALSE(d50.outside_hypothesis);
    // theory: distance ~ N^-1/2, so an eightfold drop in N costs about
    // sqrt(8); allow generous noise envelopes around that
    CHECK(d400.distance - d400.dkw_bound <= d50.distance + d50.dkw_bound);
    CHECK(d50.distance - d50.dkw_bound <=
          16.0 * (d400.distance + d400.dkw_bound));
    CHECK(d400.distance < 0.01);
  }
}

TEST_CASE("clt rejects starved inputs") {
  WeightedSumSampler s;
  CHECK_THROWS_AS(weighted_clt_distance(s, 999), std::invalid_argument);
  s.n_terms = 1;
  CHECK_THROWS_AS(weighted_clt_distance(s, 10000), std::invalid_argument);
  s.n_terms = 100;
  s.distribution = Distribution::StudentT;
  s.student_df = 0;
  CHECK_THROWS_AS(weighted_clt_distance(s, 10000), std::invalid_argument);
  s.distribution = Distribution::Custom;
  CHECK_THROWS_AS(weighted_clt_distance(s, 10000), std::invalid_argument);
}

TEST_CASE("student t flags the hypothesis breach but still runs") {
  WeightedSumSampler s;
  s.distribution = Distribution::StudentT;
  s.student_df = 5;
  s.n_terms = 100;
  auto res = weighted_clt_distance(s, 5000);
  CHECK(res.outside_hypothesis);
  CHECK(res.distance > 0.0);
  CHECK(res.distance < 0.5);
}

TEST_CASE("strong law trajectories sink under the root-N-log-N yardstick") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    WeightedSumSampler s;
    s.distribution = Distribution::StdGaussian;
    s.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
    s.seed = seed;
    auto pts = weighted_slln_trajectory(s, 2.0, {10000});
    REQUIRE(pts.size() == 1);
    CHECK(std::fabs(pts[0].scaled) < 0.05);
    CHECK(std::fabs(pts[0].single_log_scaled) < 3.0);
  }
}

TEST_CASE("both slln scalings describe the same underlying sum") {
  WeightedSumSampler s;
  s.distribution = Distribution::UniformSym;
  s.spec = make_weight(WeightKind::BumpPQ, 1.0, 2.0);
  s.seed = 11;
  // mu < 2 selects sigma = 1/mu + 1
  auto pts = weighted_slln_trajectory(s, 1.0, {100, 1000, 10000});
  for (const auto& pt : pts) {
    const double n = static_cast<double>(pt.n);
    const double sum_a = pt.scaled * std::pow(n, 2.0);
    const double sum_b = pt.single_log_scaled * std::sqrt(n * std::log(n));
    CHECK(sum_a == doctest::Approx(sum_b).epsilon(1e-12));
  }
}

TEST_CASE("degenerate samples give identically zero trajectories") {
  WeightedSumSampler s;
  s.distribution = Distribution::Custom;
  s.custom_quantile = [](double) { return 0.0; };
  s.custom_mean = 0.0;
  auto pts = weighted_slln_trajectory(s, 2.0, {10, 100, 1000});
  for (const auto& pt : pts) {
    CHECK(pt.scaled == 0.0);
    CHECK(pt.single_log_scaled == 0.0);
  }
}

TEST_CASE("slln validates moments and grids") {
  WeightedSumSampler s;
  s.distribution = Distribution::StudentT;
  s.student_df = 3;
  CHECK_THROWS_AS(weighted_slln_trajectory(s, 3.0, {100}),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_slln_trajectory(s, 4.5, {100}),
                  std::invalid_argument);
  auto ok = weighted_slln_trajectory(s, 2.0, {100});  // mu < df is fine
  CHECK(ok.size() == 1);
  s.distribution = Distribution::StdGaussian;
  CHECK_THROWS_AS(weighted_slln_trajectory(s, 0.0, {100}),
                  std::invalid_argument);
  CHECK_THROWS_AS(weighted_slln_trajectory(s, 2.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_slln_trajectory(s, 2.0, {100, 1}),
                  std::invalid_argument);
}

TEST_CASE("law of large numbers concentrates for gaussian inputs") {
  WeightedSumSampler s;
  s.distribution = Distribution::StdGaussian;
  s.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  s.n_terms = 10000;
  s.seed = 3;
  auto res = weighted_lln_check(s, 0.05, 2000);
  CHECK(res.probability > 0.99);
  CHECK_FALSE(res.hypotheses_violated);
}

TEST_CASE("constant samples concentrate with probability one") {
  WeightedSumSampler s;
  s.distribution = Distribution::Custom;
  s.custom_quantile = [](double) { return 2.5; };
  s.custom_mean = 2.5;
  s.n_terms = 500;
  auto res = weighted_lln_check(s, 1e-6, 1000);
  CHECK(res.probability == 1.0);
}

TEST_CASE("heavy tails break concentration and raise the flag") {
  WeightedSumSampler s;
  s.distribution = Distribution::StudentT;
  s.student_df = 1;  // no mean exists
  s.n_terms = 10000;
  s.seed = 5;
  auto res = weighted_lln_check(s, 0.05, 2000);
  CHECK(res.hypotheses_violated);
  CHECK(res.probability < 0.5);
  // a t distribution with two degrees of freedom has a mean again
  s.student_df = 2;
  auto res2 = weighted_lln_check(s, 0.05, 1000);
  CHECK_FALSE(res2.hypotheses_violated);
}

TEST_CASE("lln validates epsilon and trials") {
  WeightedSumSampler s;
  s.n_terms = 100;
  CHECK_THROWS_AS(weighted_lln_check(s, 0.0, 2000), std::invalid_argument);
  CHECK_THROWS_AS(weighted_lln_check(s, -1.0, 2000), std::invalid_argument);
  CHECK_THROWS_AS(weighted_lln_check(s, 0.1, 999), std::invalid_argument);
}
