// SPDX-License-Identifier: MIT
#include "wba/ddmath.hpp"

#include <array>
#include <cmath>

namespace wba {

namespace {

// 1/k! as double-double, k = 0..31.
const std::array<dd, 32>& inv_factorials() {
  static const std::array<dd, 32> table = [] {
    std::array<dd, 32> t{};
    dd fact = dd_from(1.0);
    t[0] = dd_from(1.0);
    for (int k = 1; k < 32; ++k) {
      fact = dd_mul(fact, static_cast<double>(k));
      t[k] = dd_div(dd_from(1.0), fact);
    }
    return t;
  }();
  return table;
}

// Taylor sin on |a| <= pi/4.
dd sin_taylor(dd a) {
  const auto& inv = inv_factorials();
  const dd a2 = dd_sqr(a);
  dd term = a;
  dd sum = a;
  double sign = -1.0;
  for (int k = 3; k <= 31; k += 2) {
    term = dd_mul(term, a2);
    const dd contrib = dd_mul(dd_mul(term, inv[k]), sign);
    sum = dd_add(sum, contrib);
    if (std::fabs(contrib.hi) < 1e-35 * std::fabs(sum.hi)) break;
    sign = -sign;
  }
  return sum;
}

// Taylor cos on |a| <= pi/4.
dd cos_taylor(dd a) {
  const auto& inv = inv_factorials();
  const dd a2 = dd_sqr(a);
  dd term = dd_from(1.0);
  dd sum = dd_from(1.0);
  double sign = -1.0;
  for (int k = 2; k <= 30; k += 2) {
    term = dd_mul(term, a2);
    const dd contrib = dd_mul(dd_mul(term, inv[k]), sign);
    sum = dd_add(sum, contrib);
    if (std::fabs(contrib.hi) < 1e-35 * std::fabs(sum.hi)) break;
    sign = -sign;
  }
  return sum;
}

}  // namespace

dd dd_exp(dd a) {
  // Below this the result underflows past the smallest subnormal anyway.
  if (a.hi <= -746.0) return {0.0, 0.0};
  if (a.hi >= 710.0) return {HUGE_VAL, 0.0};
  const double k = std::nearbyint(a.hi / kDDLn2.hi);
  const dd r = dd_sub(a, dd_mul(kDDLn2, k));
  // |r| <= ln2/2 + eps; plain Taylor converges fast enough
  const auto& inv = inv_factorials();
  dd term = r;
  dd sum = dd_add(dd_from(1.0), r);
  for (int n = 2; n <= 30; ++n) {
    term = dd_mul(term, r);
    const dd contrib = dd_mul(term, inv[n]);
    sum = dd_add(sum, contrib);
    if (std::fabs(contrib.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  const int ik = static_cast<int>(k);
  return {std::ldexp(sum.hi, ik), std::ldexp(sum.lo, ik)};
}

dd dd_log(dd a) {
  // One Newton step on x -> x + a e^{-x} - 1 squares the seed accuracy.
  const double x0 = std::log(a.hi);
  dd x = dd_from(x0);
  const dd e = dd_mul(a, dd_exp(dd_neg(x)));
  x = dd_add(x, dd_sub(e, dd_from(1.0)));
  return x;
}

dd dd_pow(dd a, dd b) { return dd_exp(dd_mul(dd_log(a), b)); }

dd_sincos dd_sincospi2(dd t) {
  // 2*pi*t = (pi/2) * (q + r) with integer q and |r| <= 1/2.
  const dd u = dd_mul(t, 4.0);
  const double qd = std::nearbyint(u.hi);
  const dd r = dd_sub(u, qd);
  const long long qi = static_cast<long long>(qd);
  const int q = static_cast<int>(((qi % 4) + 4) % 4);
  const dd a = dd_mul(r, kDDHalfPi);
  const dd s = sin_taylor(a);
  const dd c = cos_taylor(a);
  switch (q) {
    case 0: return {s, c};
    case 1: return {c, dd_neg(s)};
    case 2: return {dd_neg(s), dd_neg(c)};
    default: return {dd_neg(c), s};
  }
}

}  // namespace wba
