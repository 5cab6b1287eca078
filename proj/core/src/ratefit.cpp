// SPDX-License-Identifier: MIT
#include "wba/ratefit.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace wba {

namespace {

struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = -1.0;  // -1 marks "not a valid candidate"
  bool ok = false;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinFit f;
  if (!(sxx > 0.0)) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.ok = true;
  return f;
}

struct UsablePoints {
  std::vector<double> n;       // as doubles
  std::vector<double> log_err;
  std::int64_t n_min = 0, n_max = 0;
  bool truncated = false;
};

UsablePoints usable_points(const ErrorCurve& curve) {
  UsablePoints u;
  for (size_t i = 0; i < curve.n_grid.size(); ++i) {
    if (curve.floor_flag[i] || !(curve.errors[i] > 0.0)) {
      u.truncated = true;
      continue;
    }
    u.n.push_back(static_cast<double>(curve.n_grid[i]));
    u.log_err.push_back(std::log(curve.errors[i]));
    if (u.n_min == 0) u.n_min = curve.n_grid[i];
    u.n_max = curve.n_grid[i];
  }
  return u;
}

RateFit fit_rate_impl(const ErrorCurve& curve, bool with_lin_exp) {
  const UsablePoints u = usable_points(curve);
  RateFit fit;
  fit.floor_truncated = u.truncated;
  fit.n_range_used = {u.n_min, u.n_max};
  if (u.n.size() < 5) {
    fit.model = RateModel::Inconclusive;
    fit.note = "fewer than 5 points above the precision floor";
    return fit;
  }

  // exponential: best zeta on the pinned grid
  double best_zeta = 0.0;
  LinFit best_exp;
  std::vector<double> x(u.n.size());
  for (int zi = 5; zi <= 100; ++zi) {
    const double zeta = zi / 100.0;
    for (size_t i = 0; i < u.n.size(); ++i) x[i] = std::pow(u.n[i], zeta);
    const LinFit f = linear_fit(x, u.log_err);
    if (!f.ok || f.slope >= 0.0) continue;
    if (f.r_squared > best_exp.r_squared) {
      best_exp = f;
      best_zeta = zeta;
    }
  }

  // polynomial: log err vs log N
  for (size_t i = 0; i < u.n.size(); ++i) x[i] = std::log(u.n[i]);
  LinFit poly = linear_fit(x, u.log_err);
  if (poly.ok && poly.slope >= 0.0) poly.r_squared = -1.0;

  // N / log N candidate for the double-exponential weight
  LinFit lexp;
  if (with_lin_exp) {
    for (size_t i = 0; i < u.n.size(); ++i) x[i] = u.n[i] / std::log(u.n[i]);
    lexp = linear_fit(x, u.log_err);
    if (lexp.ok && lexp.slope >= 0.0) lexp.r_squared = -1.0;
  }

  const double re = best_exp.r_squared;
  const double rp = poly.r_squared;
  const double rl = lexp.r_squared;
  const double best = std::max(re, std::max(rp, rl));
  if (best < 0.9) {
    fit.model = RateModel::Inconclusive;
    fit.r_squared = std::max(0.0, best);
    fit.note = "no candidate model reaches r^2 = 0.9";
    return fit;
  }
  if (re == best) {
    fit.model = RateModel::Exponential;
    fit.zeta = best_zeta;
    fit.c = -best_exp.slope;
    fit.log_c0 = best_exp.intercept;
    fit.r_squared = re;
  } else if (rl == best) {
    fit.model = RateModel::LinExpOverLog;
    fit.c = -lexp.slope;
    fit.log_c0 = lexp.intercept;
    fit.r_squared = rl;
  } else {
    fit.model = RateModel::Polynomial;
    fit.m = -poly.slope;
    fit.log_c0 = poly.intercept;
    fit.r_squared = rp;
  }
  return fit;
}

}  // namespace

RateFit fit_rate(const ErrorCurve& curve) { return fit_rate_impl(curve, false); }

RateFit fit_rate(const ErrorCurve& curve, const WeightSpec& spec) {
  return fit_rate_impl(curve, spec.kind == WeightKind::DoubleExp);
}

ClassifyResult classify_orbit(const SignalSource& signal, const WeightSpec& spec,
                              const std::vector<std::int64_t>& n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
  const int m = signal.value_dim();
  ClassifyResult res;
  res.proxy.n_grid = n_grid;
  res.proxy.reference.assign(m, 0.0);
  res.proxy.floor = kStandardFloor;
  res.proxy.errors.assign(n_grid.size(), 0.0);
  res.proxy.floor_flag.assign(n_grid.size(), false);
  for (size_t i = 0; i < n_grid.size(); ++i) {
    const std::vector<double> a = weighted_average(signal, spec, n_grid[i]);
    const std::vector<double> b = weighted_average(signal, spec, 2 * n_grid[i]);
    double err = 0.0;
    for (int j = 0; j < m; ++j) err = std::max(err, std::fabs(b[j] - a[j]));
    res.proxy.floor_flag[i] = err < res.proxy.floor;
    res.proxy.errors[i] = std::max(err, res.proxy.floor);
  }
  res.evidence = fit_rate(res.proxy, spec);

  size_t floored = 0;
  for (bool f : res.proxy.floor_flag) floored += f ? 1 : 0;
  if (floored == res.proxy.floor_flag.size()) {
    // the proxy collapsed immediately; that is the regular signature too
    res.verdict = OrbitClass::Regular;
    res.evidence.note = "self-difference at the precision floor everywhere";
    return res;
  }
  switch (res.evidence.model) {
    case RateModel::Exponential:
    case RateModel::LinExpOverLog:
      res.verdict = OrbitClass::Regular;
      break;
    case RateModel::Polynomial:
      if (res.evidence.m >= 0.3 && res.evidence.m <= 0.7)
        res.verdict = OrbitClass::Chaotic;
      else if (res.evidence.m >= 1.5)
        res.verdict = OrbitClass::Regular;
      else
        res.verdict = OrbitClass::Indeterminate;
      break;
    case RateModel::Inconclusive:
      res.verdict = OrbitClass::Indeterminate;
      break;
  }
  return res;
}

namespace {

double sup_n_over_normalizer(const WeightSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, double> cache;
  const auto key = std::make_tuple(static_cast<int>(spec.kind), spec.p, spec.q);
  if (spec.kind != WeightKind::Custom) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  double sup = 0.0;
  for (std::int64_t n = 2; n <= 10000; ++n)
    sup = std::max(sup, static_cast<double>(n) / normalizer(spec, n));
  if (spec.kind != WeightKind::Custom) {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, sup);
  }
  return sup;
}

}  // namespace

double theoretical_bound(const WeightSpec& spec, int m, double gamma, double tau,
                         const std::map<std::vector<int>, double>& fourier_decay) {
  if (m < 2)
    throw std::invalid_argument("bound order m must be an integer >= 2");
  if (spec.kind == WeightKind::Uniform)
    throw std::invalid_argument(
        "uniform weight breaks the bound premises: its first derivative is two "
        "boundary jumps of total variation 2, and no L1 derivative of order "
        ">= 1 exists");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be positive");
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");

  const double c1 = sup_n_over_normalizer(spec);
  const double c2 = derivative_l1_norm(spec, m);
  const double c3 = std::pow(2.0 * 3.14159265358979323846 * gamma,
                             -static_cast<double>(m));
  Accumulator c4;
  for (const auto& [k, amp] : fourier_decay) {
    double l1 = 0.0;
    for (int kj : k) l1 += std::fabs(static_cast<double>(kj));
    if (l1 == 0.0) continue;  // the k = 0 mode never enters the bound
    if (!(amp >= 0.0) || !std::isfinite(amp))
      throw std::domain_error("fourier decay amplitudes must be finite and >= 0");
    c4.add(amp * std::pow(l1, tau * static_cast<double>(m)));
  }
  const double c4v = c4.value();
  const double bound = c1 * c2 * c3 * c4v;
  if (!std::isfinite(bound))
    throw std::runtime_error("bound diverges for the given decay data");
  return bound;
}

}  // namespace wba
