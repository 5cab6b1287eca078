// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstdint>

// Error-free transforms and double-double arithmetic.
//
// Everything here assumes IEEE-754 binary64 with round-to-nearest; the build
// rejects -ffast-math because these identities do not survive value-changing
// optimizations.

namespace wba {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

// s = fl(a+b), err exact.
inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Requires |a| >= |b| or a == 0.
inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

// p = fl(a*b), err exact via fused multiply-add.
inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_from(double x) { return {x, 0.0}; }

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  const dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd dd_add(dd a, double b) {
  dd s = two_sum(a.hi, b);
  s.lo += a.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }
inline dd dd_sub(dd a, double b) { return dd_add(a, -b); }

inline dd dd_mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  dd r = dd_sub(a, dd_mul(b, q1));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  const double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return dd_add(q, q3);
}

inline dd dd_div(dd a, double b) { return dd_div(a, dd_from(b)); }

inline dd dd_sqr(dd a) {
  dd p = two_prod(a.hi, a.hi);
  p.lo += 2.0 * a.hi * a.lo;
  return quick_two_sum(p.hi, p.lo);
}

// Karp-Markstein correction on a double seed; full double-double accuracy.
inline dd dd_sqrt(dd a) {
  if (a.hi == 0.0 && a.lo == 0.0) return {0.0, 0.0};
  const double x = 1.0 / std::sqrt(a.hi);
  const double ax = a.hi * x;
  const dd e = dd_sub(a, two_prod(ax, ax));
  return quick_two_sum(ax, e.hi * (x * 0.5));
}

inline dd dd_floor(dd a) {
  const double f = std::floor(a.hi);
  if (f != a.hi) return {f, 0.0};
  // hi already integral: the fractional information lives in lo
  return quick_two_sum(f, std::floor(a.lo));
}

// Fractional part in [0,1).
inline dd dd_frac(dd a) {
  dd r = dd_sub(a, dd_floor(a));
  if (r.hi >= 1.0) r = dd_sub(r, 1.0);
  if (r.hi < 0.0) r = dd_add(r, 1.0);
  return r;
}

inline double dd_to_double(dd a) { return a.hi + a.lo; }

inline bool dd_less(dd a, dd b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline double dd_abs_hi(dd a) { return std::fabs(a.hi); }

// Neumaier compensated accumulator. Fixed traversal order is the caller's
// job; the compensation keeps the result within a few ulps of the exact sum
// regardless of cancellation pattern.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Double-double accumulator for the extended-precision averaging path.
class DDAccumulator {
 public:
  void add(double x) { sum_ = dd_add(sum_, x); }
  void add(dd x) { sum_ = dd_add(sum_, x); }
  dd value_dd() const { return sum_; }
  double value() const { return dd_to_double(sum_); }

 private:
  dd sum_{};
};

}  // namespace wba
