// SPDX-License-Identifier: MIT
#include "wba/periodic.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wba/accum.hpp"
#include "wba/ddmath.hpp"
#include "wba/dynamics.hpp"

namespace wba {
namespace {

// Unit-circle table at the T-th roots: cs[j] = cos(2 pi j / T), sn[j] =
// sin(2 pi j / T), evaluated in double-double so the table is correctly
// rounded. Quarter-period entries (j/T in {0, 1/4, 1/2, 3/4}) come out
// exact, which the even-period cancellation tests rely on.
void build_unit_table(int period, std::vector<dd>& cs, std::vector<dd>& sn) {
  cs.resize(static_cast<std::size_t>(period));
  sn.resize(static_cast<std::size_t>(period));
  for (int j = 0; j < period; ++j) {
    const dd t = dd_div(dd_from(static_cast<double>(j)),
                        static_cast<double>(period));
    const dd_sincos sc = dd_sincospi2(t);
    cs[static_cast<std::size_t>(j)] = sc.cos;
    sn[static_cast<std::size_t>(j)] = sc.sin;
  }
}

constexpr int kMaxProjectionPeriod = 32768;
constexpr int kMaxTablePeriod = 1 << 22;

}  // namespace

double TrigInterp::eval(std::int64_t n) const {
  const int t = period;
  if (t <= 0) throw std::domain_error("TrigInterp::eval: empty interpolant");
  const std::int64_t j0 = ((n % t) + t) % t;
  Accumulator acc;
  acc.add(a0);
  for (std::size_t l = 1; l <= cos_coeffs.size(); ++l) {
    const std::int64_t j = (static_cast<std::int64_t>(l) * j0) % t;
    const dd_sincos sc = dd_sincospi2(
        dd_div(dd_from(static_cast<double>(j)), static_cast<double>(t)));
    acc.add(cos_coeffs[l - 1] * sc.cos.hi);
    if (l <= sin_coeffs.size()) acc.add(sin_coeffs[l - 1] * sc.sin.hi);
  }
  return acc.value();
}

TrigInterp trig_interpolate(const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("trig_interpolate: empty sample vector");
  if (values.size() > static_cast<std::size_t>(kMaxProjectionPeriod))
    throw std::invalid_argument(
        "trig_interpolate: period too large for the dense projection");
  for (const double v : values)
    if (!std::isfinite(v))
      throw std::domain_error("trig_interpolate: non-finite sample");

  const int t = static_cast<int>(values.size());
  TrigInterp out;
  out.period = t;

  Accumulator mean;
  for (const double v : values) mean.add(v);
  out.a0 = mean.value() / static_cast<double>(t);
  if (t == 1) return out;

  std::vector<dd> cs, sn;
  build_unit_table(t, cs, sn);

  const bool even = (t % 2 == 0);
  const int m = t / 2;  // highest mode, (t-1)/2 when odd
  const double half = static_cast<double>(t) / 2.0;

  const int top = even ? m - 1 : m;
  for (int l = 1; l <= top; ++l) {
    Accumulator ca, sa;
    std::int64_t j = 0;
    for (int n = 0; n < t; ++n) {
      ca.add(values[static_cast<std::size_t>(n)] *
             cs[static_cast<std::size_t>(j)].hi);
      sa.add(values[static_cast<std::size_t>(n)] *
             sn[static_cast<std::size_t>(j)].hi);
      j += l;
      if (j >= t) j -= t;
    }
    out.cos_coeffs.push_back(ca.value() / half);
    out.sin_coeffs.push_back(sa.value() / half);
  }
  if (even) {
    // Nyquist mode: basis vector (-1)^n has squared norm T, not T/2, and
    // pairs with no sine partner.
    Accumulator ca;
    for (int n = 0; n < t; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      ca.add(values[static_cast<std::size_t>(n)] * sign);
    }
    out.cos_coeffs.push_back(ca.value() / static_cast<double>(t));
  }
  return out;
}

PeriodicErrorResult periodic_weighted_error(
    const std::vector<double>& values, const WeightSpec& spec,
    const std::vector<std::int64_t>& n_grid, Precision precision) {
  PeriodicErrorResult out;
  out.interp = trig_interpolate(values);
  const SignalPtr signal = make_periodic_signal(values);
  const std::vector<double> reference{out.interp.a0};
  out.curve = error_curve(*signal, spec, n_grid, reference, precision);
  out.fit = fit_rate(out.curve, spec);
  return out;
}

ModeSum mode_sum_smallness(int k, int period, const WeightSpec& spec,
                           std::int64_t n_steps, Precision precision) {
  if (period < 1)
    throw std::invalid_argument("mode_sum_smallness: period must be >= 1");
  if (2 * std::abs(static_cast<std::int64_t>(k)) >
      static_cast<std::int64_t>(period))
    throw std::invalid_argument(
        "mode_sum_smallness: |k|/period must not exceed 1/2");
  if (n_steps < 2)
    throw std::invalid_argument("mode_sum_smallness: need n_steps >= 2");

  ModeSum out;
  if (k == 0) {
    // The zero mode is the normalized weight sum itself; nothing to measure.
    out.magnitude = 1.0;
    out.zero_mode = true;
    return out;
  }

  const std::int64_t t = period;
  const std::int64_t kr = ((static_cast<std::int64_t>(k) % t) + t) % t;

  std::vector<dd> cs, sn;
  const bool tabulated = (period <= kMaxTablePeriod);
  if (tabulated) build_unit_table(period, cs, sn);
  const auto phase_at = [&](std::int64_t j) -> dd_sincos {
    if (tabulated)
      return {sn[static_cast<std::size_t>(j)], cs[static_cast<std::size_t>(j)]};
    return dd_sincospi2(dd_div(dd_from(static_cast<double>(j)),
                               static_cast<double>(t)));
  };

  if (precision == Precision::Extended) {
    DDAccumulator re, im, norm;
    std::int64_t j = 0;
    for (std::int64_t n = 0; n < n_steps; ++n) {
      const dd x = dd_div(dd_from(static_cast<double>(n)),
                          static_cast<double>(n_steps));
      const dd w = eval_weight_dd(spec, x);
      if (w.hi != 0.0 || w.lo != 0.0) {
        const dd_sincos sc = phase_at(j);
        re.add(dd_mul(w, sc.cos));
        im.add(dd_mul(w, sc.sin));
        norm.add(w);
      }
      j += kr;
      if (j >= t) j -= t;
    }
    const dd a = norm.value_dd();
    if (!(a.hi > 0.0))
      throw std::runtime_error("mode_sum_smallness: degenerate weight sum");
    const dd r = re.value_dd();
    const dd i = im.value_dd();
    const dd mag = dd_sqrt(dd_add(dd_sqr(r), dd_sqr(i)));
    out.magnitude = dd_to_double(dd_div(mag, a));
    return out;
  }

  Accumulator re, im, norm;
  std::int64_t j = 0;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const double x = static_cast<double>(n) / static_cast<double>(n_steps);
    const double w = eval_weight(spec, x);
    if (w != 0.0) {
      const dd_sincos sc = phase_at(j);
      re.add(w * sc.cos.hi);
      im.add(w * sc.sin.hi);
      norm.add(w);
    }
    j += kr;
    if (j >= t) j -= t;
  }
  const double a = norm.value();
  if (!(a > 0.0))
    throw std::runtime_error("mode_sum_smallness: degenerate weight sum");
  out.magnitude = std::hypot(re.value(), im.value()) / a;
  return out;
}

}  // namespace wba
