// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "wba/periodic.hpp"

using namespace wba;

TEST_CASE("discrete trigonometric basis is orthogonal for all T <= 64") {
  for (int t = 2; t <= 64; ++t) {
    const int m = t / 2;
    auto c = [&](int l, int n) {
      return std::cos(2.0 * M_PI * l * n / static_cast<double>(t));
    };
    auto s = [&](int l, int n) {
      return std::sin(2.0 * M_PI * l * n / static_cast<double>(t));
    };
    for (int l = 0; l <= m; ++l) {
      for (int k = l; k <= m; ++k) {
        double cc = 0.0, ss = 0.0, cs = 0.0;
        for (int n = 0; n < t; ++n) {
          cc += c(l, n) * c(k, n);
          ss += s(l, n) * s(k, n);
          cs += c(l, n) * s(k, n);
        }
        double cc_want = 0.0, ss_want = 0.0;
        if (l == k) {
          bool full = l == 0 || (t % 2 == 0 && l == m);
          cc_want = full ? t : t / 2.0;
          ss_want = full ? 0.0 : t / 2.0;
        }
        CHECK(std::fabs(cc - cc_want) <= 1e-8 * t);
        CHECK(std::fabs(ss - ss_want) <= 1e-8 * t);
        CHECK(std::fabs(cs) <= 1e-8 * t);
      }
    }
  }
}

TEST_CASE("interpolation reproduces the data at the nodes") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t : {2, 3, 4, 7, 8, 16, 33, 64}) {
    std::vector<double> data(t);
    double scale = 0.0;
    for (double& x : data) {
      x = u(rng);
      scale = std::max(scale, std::fabs(x));
    }
    auto interp = trig_interpolate(data);
    CHECK(interp.period == t);
    for (int j = 0; j < t; ++j)
      CHECK(std::fabs(interp.eval(j) - data[j]) <= 1e-10 * scale);
    // periodic extension is bitwise periodic
    CHECK(interp.eval(3) == interp.eval(3 + 7LL * t));
  }
}

TEST_CASE("zero mode is the mean, constants have no other modes") {
  std::vector<double> data{2.5, 2.5, 2.5, 2.5, 2.5};
  auto interp = trig_interpolate(data);
  CHECK(interp.a0 == doctest::Approx(2.5).epsilon(1e-15));
  for (double a : interp.cos_coeffs) CHECK(std::fabs(a) <= 1e-13);
  for (double b : interp.sin_coeffs) CHECK(std::fabs(b) <= 1e-13);
}

TEST_CASE("period two alternating data is the pure Nyquist mode") {
  auto interp = trig_interpolate({1.0, -1.0});
  CHECK(interp.period == 2);
  CHECK(std::fabs(interp.a0) <= 1e-15);
  REQUIRE(interp.cos_coeffs.size() == 1);
  CHECK(interp.cos_coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (double b : interp.sin_coeffs) CHECK(std::fabs(b) <= 1e-15);
}

TEST_CASE("period four cosine samples recover cos(2 pi x)") {
  auto interp = trig_interpolate({1.0, 0.0, -1.0, 0.0});
  CHECK(std::fabs(interp.a0) <= 1e-15);
  REQUIRE(interp.cos_coeffs.size() == 2);
  CHECK(interp.cos_coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(interp.cos_coeffs[1]) <= 1e-14);  // Nyquist empty
  for (double b : interp.sin_coeffs) CHECK(std::fabs(b) <= 1e-15);
}

TEST_CASE("odd period coefficients match the direct projection formulas") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int t = 11;
  std::vector<double> data(t);
  for (double& x : data) x = u(rng);
  auto interp = trig_interpolate(data);
  const int m = t / 2;
  REQUIRE(static_cast<int>(interp.cos_coeffs.size()) == m);
  REQUIRE(static_cast<int>(interp.sin_coeffs.size()) == m);
  for (int l = 1; l <= m; ++l) {
    double ca = 0.0, sa = 0.0;
    for (int n = 0; n < t; ++n) {
      ca += data[n] * std::cos(2.0 * M_PI * l * n / t);
      sa += data[n] * std::sin(2.0 * M_PI * l * n / t);
    }
    CHECK(std::fabs(interp.cos_coeffs[l - 1] - 2.0 * ca / t) <= 1e-12);
    CHECK(std::fabs(interp.sin_coeffs[l - 1] - 2.0 * sa / t) <= 1e-12);
  }
}

TEST_CASE("interpolation validates its input") {
  CHECK_THROWS_AS(trig_interpolate({}), std::invalid_argument);
  std::vector<double> huge(40000, 0.0);
  CHECK_THROWS_AS(trig_interpolate(huge), std::invalid_argument);
  CHECK_THROWS(trig_interpolate({1.0, std::nan("")}));
  // period 1 is legal: the mean is the whole polynomial
  auto one = trig_interpolate({3.5});
  CHECK(one.period == 1);
  CHECK(one.a0 == 3.5);
  CHECK(one.cos_coeffs.empty());
}

TEST_CASE("weighted error on periodic data decays exponentially") {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  auto res = periodic_weighted_error({1.0, -1.0}, spec,
                                     {8, 16, 32, 64, 128, 256, 512, 2000});
  CHECK(res.curve.errors.back() < 1e-9);
  CHECK(res.fit.model == RateModel::Exponential);
  CHECK(res.fit.zeta >= 0.3);
  CHECK(res.fit.zeta <= 0.7);
}

TEST_CASE("random period seven data under the sharp bump") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> data(7);
  for (double& x : data) x = u(rng);
  auto spec = make_weight(WeightKind::BumpPQ, 2.0, 2.0);
  auto res = periodic_weighted_error(data, spec, {250, 500, 1000, 2000});
  CHECK(res.curve.errors.back() < 1e-10);
}

TEST_CASE("periodic error curve agrees with a direct average") {
  std::vector<double> data{0.3, -1.2, 0.9};
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  auto res = periodic_weighted_error(data, spec, {64, 128});
  auto sig = make_periodic_signal(data);
  double mean = (0.3 - 1.2 + 0.9) / 3.0;
  double direct = std::fabs(weighted_average(*sig, spec, 64)[0] - mean);
  direct = std::max(direct, kStandardFloor);
  CHECK(res.curve.errors[0] == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("mode sums are small off the zero class") {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  auto half = mode_sum_smallness(1, 2, spec, 1000);
  CHECK_FALSE(half.zero_mode);
  CHECK(half.magnitude < 1e-9);
  auto third = mode_sum_smallness(1, 3, spec, 2000);
  auto seventh = mode_sum_smallness(1, 7, spec, 2000);
  CHECK(third.magnitude < 1e-6);
  CHECK(seventh.magnitude < 1e-6);
}

TEST_CASE("mode sum matches a direct complex sum") {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const int t = 3, k = 1;
  const std::int64_t n = 500;
  auto got = mode_sum_smallness(k, t, spec, n);
  double re = 0.0, im = 0.0, a = 0.0;
  for (std::int64_t j = 0; j < n; ++j) {
    double w = eval_weight(spec, static_cast<double>(j) / n);
    double phase = 2.0 * M_PI * static_cast<double>((j * k) % t) / t;
    re += w * std::cos(phase);
    im += w * std::sin(phase);
    a += w;
  }
  double expect = std::hypot(re, im) / a;
  CHECK(got.magnitude == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("uniform weights kill the Nyquist class exactly at even N") {
  auto spec = make_weight(WeightKind::Uniform);
  auto res = mode_sum_smallness(1, 2, spec, 1000);
  CHECK(res.magnitude == 0.0);
  auto ext = mode_sum_smallness(1, 2, spec, 1000, Precision::Extended);
  CHECK(ext.magnitude == 0.0);
}

TEST_CASE("mode sum flags the zero mode and validates inputs") {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  auto zero = mode_sum_smallness(0, 5, spec, 100);
  CHECK(zero.zero_mode);
  CHECK(zero.magnitude == 1.0);
  auto neg = mode_sum_smallness(-1, 5, spec, 100);
  auto pos = mode_sum_smallness(1, 5, spec, 100);
  CHECK(neg.magnitude == pos.magnitude);
  CHECK_THROWS_AS(mode_sum_smallness(2, 3, spec, 100), std::invalid_argument);
  CHECK_THROWS_AS(mode_sum_smallness(5, 5, spec, 100), std::invalid_argument);
  CHECK_THROWS_AS(mode_sum_smallness(1, 0, spec, 100), std::invalid_argument);
  CHECK_THROWS_AS(mode_sum_smallness(1, 2, spec, 0), std::invalid_argument);
}
