// SPDX-License-Identifier: MIT
#include "wba/weights.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "wba/ddmath.hpp"

namespace wba {

namespace {

void validate_params(const WeightSpec& s) {
  if (s.kind == WeightKind::BumpPQ &&
      !(s.p > 0.0 && s.q > 0.0 && std::isfinite(s.p) && std::isfinite(s.q)))
    throw std::invalid_argument("weight exponents p, q must be positive and finite");
  if (s.kind == WeightKind::Custom && !s.custom_eval)
    throw std::invalid_argument("custom weight requires an evaluator");
}

// log of the unnormalized profile, -inf meaning exact zero.
double log_profile(const WeightSpec& s, double x) {
  switch (s.kind) {
    case WeightKind::BumpPQ: {
      if (!(x > 0.0 && x < 1.0)) return -HUGE_VAL;
      const double g = -std::pow(x, -s.p) * std::pow(1.0 - x, -s.q);
      return g;
    }
    case WeightKind::DoubleExp: {
      if (!(x > 0.0 && x < 1.0)) return -HUGE_VAL;
      const double ix = 1.0 / x;
      const double iy = 1.0 / (1.0 - x);
      if (ix > 709.0 || iy > 709.0) return -HUGE_VAL;
      return -(std::exp(ix) + std::exp(iy));
    }
    default:
      return 0.0;  // not used for the other kinds
  }
}

double profile_value(const WeightSpec& s, double x) {
  switch (s.kind) {
    case WeightKind::BumpPQ:
    case WeightKind::DoubleExp: {
      const double g = log_profile(s, x);
      if (g < kWeightLogFlush) return 0.0;
      return std::exp(g);
    }
    case WeightKind::SineSquared: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double sn = dd_sincospi2(dd_from(0.5 * x)).sin.hi;
      return sn * sn;
    }
    case WeightKind::Uniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case WeightKind::Custom: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double v = s.custom_eval(x);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::domain_error("custom weight returned a negative or non-finite value");
      return v;
    }
  }
  return 0.0;
}

struct ZEntry {
  double z = 0.0;
  double log_z = 0.0;
};

ZEntry compute_z(const WeightSpec& s) {
  switch (s.kind) {
    case WeightKind::Uniform:
      return {1.0, 0.0};
    case WeightKind::SineSquared:
      return {0.5, std::log(0.5)};  // integral of sin^2(pi x)
    default: {
      using boost::math::quadrature::gauss_kronrod;
      auto f = [&s](double x) { return profile_value(s, x); };
      const double z =
          gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
      if (!(z > 0.0) || !std::isfinite(z))
        throw std::runtime_error("weight normalization integral is degenerate");
      return {z, std::log(z)};
    }
  }
}

ZEntry z_entry(const WeightSpec& s) {
  validate_params(s);
  if (s.z_integral > 0.0) return {s.z_integral, std::log(s.z_integral)};
  if (s.kind == WeightKind::Custom) return compute_z(s);  // uncacheable
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, ZEntry> cache;
  const auto key = std::make_tuple(static_cast<int>(s.kind), s.p, s.q);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const ZEntry e = compute_z(s);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, e);
  return e;
}

}  // namespace

WeightSpec make_weight(WeightKind kind, double p, double q) {
  if (kind == WeightKind::Custom)
    throw std::invalid_argument("use make_custom_weight for custom kinds");
  WeightSpec s;
  s.kind = kind;
  s.p = p;
  s.q = q;
  validate_params(s);
  s.z_integral = z_entry(s).z;
  return s;
}

WeightSpec make_custom_weight(std::function<double(double)> unnormalized) {
  WeightSpec s;
  s.kind = WeightKind::Custom;
  s.custom_eval = std::move(unnormalized);
  validate_params(s);
  s.z_integral = compute_z(s).z;
  return s;
}

double eval_weight(const WeightSpec& spec, double x) {
  if (!std::isfinite(x)) throw std::domain_error("weight argument must be finite");
  validate_params(spec);
  switch (spec.kind) {
    case WeightKind::BumpPQ:
    case WeightKind::DoubleExp: {
      const double g = log_profile(spec, x);
      const double a = g - z_entry(spec).log_z;
      if (a < kWeightLogFlush) return 0.0;
      return std::exp(a);
    }
    case WeightKind::SineSquared: {
      if (x < 0.0 || x > 1.0) return 0.0;
      const double sn = dd_sincospi2(dd_from(0.5 * x)).sin.hi;
      return 2.0 * sn * sn;
    }
    case WeightKind::Uniform:
      return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case WeightKind::Custom:
      return profile_value(spec, x) / z_entry(spec).z;
  }
  return 0.0;
}

dd eval_weight_dd(const WeightSpec& spec, dd x) {
  if (!std::isfinite(x.hi)) throw std::domain_error("weight argument must be finite");
  validate_params(spec);
  switch (spec.kind) {
    case WeightKind::BumpPQ: {
      if (!(x.hi > 0.0 && x.hi < 1.0)) return {0.0, 0.0};
      const dd omx = dd_sub(dd_from(1.0), x);
      if (!(omx.hi > 0.0)) return {0.0, 0.0};
      const dd t1 = dd_exp(dd_mul(dd_log(x), -spec.p));
      const dd t2 = dd_exp(dd_mul(dd_log(omx), -spec.q));
      const dd g = dd_neg(dd_mul(t1, t2));
      if (g.hi < kWeightLogFlush) return {0.0, 0.0};
      return dd_div(dd_exp(g), dd_from(z_entry(spec).z));
    }
    case WeightKind::DoubleExp: {
      if (!(x.hi > 0.0) || !(x.hi < 1.0)) return {0.0, 0.0};
      const dd omx = dd_sub(dd_from(1.0), x);
      if (!(omx.hi > 0.0)) return {0.0, 0.0};
      const dd ix = dd_div(dd_from(1.0), x);
      const dd iy = dd_div(dd_from(1.0), omx);
      if (ix.hi > 709.0 || iy.hi > 709.0) return {0.0, 0.0};
      const dd g = dd_neg(dd_add(dd_exp(ix), dd_exp(iy)));
      if (g.hi < kWeightLogFlush) return {0.0, 0.0};
      return dd_div(dd_exp(g), dd_from(z_entry(spec).z));
    }
    case WeightKind::SineSquared: {
      if (x.hi < 0.0 || x.hi > 1.0) return {0.0, 0.0};
      const dd sn = dd_sincospi2(dd_mul(x, 0.5)).sin;
      return dd_mul(dd_sqr(sn), 2.0);
    }
    case WeightKind::Uniform:
      return (x.hi >= 0.0 && x.hi <= 1.0) ? dd_from(1.0) : dd{0.0, 0.0};
    case WeightKind::Custom:
      return dd_from(eval_weight(spec, dd_to_double(x)));
  }
  return {0.0, 0.0};
}

double normalizer(const WeightSpec& spec, std::int64_t n_steps) {
  if (n_steps < 2) throw std::invalid_argument("normalizer needs n_steps >= 2");
  const double N = static_cast<double>(n_steps);
  Accumulator acc;
  for (std::int64_t n = 0; n < n_steps; ++n)
    acc.add(eval_weight(spec, static_cast<double>(n) / N));
  const double a = acc.value();
  if (!(a > 0.0))
    throw std::runtime_error("degenerate normalizer: weights sum to zero");
  return a;
}

dd normalizer_dd(const WeightSpec& spec, std::int64_t n_steps) {
  if (n_steps < 2) throw std::invalid_argument("normalizer needs n_steps >= 2");
  DDAccumulator acc;
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const dd x = dd_div(dd_from(static_cast<double>(n)),
                        dd_from(static_cast<double>(n_steps)));
    acc.add(eval_weight_dd(spec, x));
  }
  const dd a = acc.value_dd();
  if (!(a.hi > 0.0))
    throw std::runtime_error("degenerate normalizer: weights sum to zero");
  return a;
}

double unnormalized_integral(const WeightSpec& spec) { return z_entry(spec).z; }

double square_integral(const WeightSpec& spec) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&spec](double x) {
    const double w = eval_weight(spec, x);
    return w * w;
  };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
}

namespace {

// Binomial coefficients up to n = 24 as doubles (exact in that range).
const std::array<std::array<double, 25>, 25>& binomials() {
  static const std::array<std::array<double, 25>, 25> table = [] {
    std::array<std::array<double, 25>, 25> c{};
    for (int n = 0; n < 25; ++n) {
      c[n][0] = 1.0;
      for (int j = 1; j <= n; ++j)
        c[n][j] = c[n - 1][j - 1] + (j <= n - 1 ? c[n - 1][j] : 0.0);
    }
    return c;
  }();
  return table;
}

// Derivatives 0..m of g(x) = -x^-p (1-x)^-q.
void bump_log_derivs(double p, double q, double x, int m, double* g) {
  const auto& C = binomials();
  std::vector<double> A(m + 1), B(m + 1);
  A[0] = std::pow(x, -p);
  B[0] = std::pow(1.0 - x, -q);
  for (int i = 0; i < m; ++i) {
    A[i + 1] = A[i] * (-(p + i)) / x;
    B[i + 1] = B[i] * (q + i) / (1.0 - x);
  }
  for (int j = 0; j <= m; ++j) {
    double s = 0.0;
    for (int i = 0; i <= j; ++i) s += C[j][i] * A[i] * B[j - i];
    g[j] = -s;
  }
}

// Derivatives 0..m of h(x) = exp(1/x) via the composition recurrence.
void exp_recip_derivs(double x, int m, double* h) {
  const auto& C = binomials();
  std::vector<double> v(m + 1);  // derivatives of 1/x
  v[0] = 1.0 / x;
  for (int j = 0; j < m; ++j) v[j + 1] = v[j] * (-(j + 1)) / x;
  h[0] = std::exp(v[0]);
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += C[k][j] * v[j + 1] * h[k - j];
    h[k + 1] = s;
  }
}

// Derivatives 0..m of g(x) = -(exp(1/x) + exp(1/(1-x))).
void dexp_log_derivs(double x, int m, double* g) {
  std::vector<double> h1(m + 1), h2(m + 1);
  exp_recip_derivs(x, m, h1.data());
  exp_recip_derivs(1.0 - x, m, h2.data());
  double sign = 1.0;
  for (int j = 0; j <= m; ++j) {
    g[j] = -(h1[j] + sign * h2[j]);
    sign = -sign;
  }
}

// |D^m of exp(g(x))| at one point, unnormalized.
double abs_profile_deriv(const WeightSpec& s, double x, int m) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  std::vector<double> g(m + 1), u(m + 1);
  if (s.kind == WeightKind::BumpPQ) {
    bump_log_derivs(s.p, s.q, x, m, g.data());
  } else {
    const double ix = 1.0 / x, iy = 1.0 / (1.0 - x);
    if (ix > 700.0 || iy > 700.0) return 0.0;
    dexp_log_derivs(x, m, g.data());
  }
  // Deep in the tails exp(g) underflows while g' overflows; those points
  // contribute nothing to the L1 norm at this precision.
  if (g[0] < -700.0) return 0.0;
  const auto& C = binomials();
  u[0] = std::exp(g[0]);
  for (int k = 0; k < m; ++k) {
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += C[k][j] * g[j + 1] * u[k - j];
    u[k + 1] = sum;
  }
  return std::fabs(u[m]);
}

}  // namespace

double derivative_l1_norm(const WeightSpec& spec, int order) {
  if (order < 1 || order > 20)
    throw std::invalid_argument("derivative order must be in 1..20");
  if (spec.kind != WeightKind::BumpPQ && spec.kind != WeightKind::DoubleExp)
    throw std::invalid_argument(
        "derivative_l1_norm is defined for the smooth compact-support kinds only");
  validate_params(spec);
  // Composite Simpson; the integrand is smooth between the <= order+2 kinks
  // that |.| introduces, and the kink cells contribute O(h^3) each.
  const int M = 1 << 17;
  const double h = 1.0 / M;
  Accumulator acc;
  for (int i = 1; i < M; ++i) {
    const double coeff = (i % 2 == 1) ? 4.0 : 2.0;
    acc.add(coeff * abs_profile_deriv(spec, i * h, order));
  }
  const double integral = acc.value() * h / 3.0;
  return integral / z_entry(spec).z;
}

}  // namespace wba
