// SPDX-License-Identifier: MIT
#include "wba/fourier.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wba/accum.hpp"
#include "wba/ddmath.hpp"
#include "parallel.hpp"

namespace wba {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void validate_request(const FourierRequest& req) {
  if (req.point_dim < 1)
    throw std::invalid_argument("fourier: point_dim must be >= 1");
  if (req.orbit.size() % static_cast<std::size_t>(req.point_dim) != 0)
    throw std::invalid_argument(
        "fourier: orbit length is not a multiple of point_dim");
  if (req.n_points() < 2)
    throw std::invalid_argument("fourier: orbit must hold at least 2 points");
  for (const double v : req.orbit)
    if (!std::isfinite(v))
      throw std::domain_error("fourier: non-finite orbit point");
  if (req.rho.dimension() == 0)
    throw std::invalid_argument("fourier: rotation must have dimension >= 1");
  if (req.theta0.size() != req.rho.dimension())
    throw std::invalid_argument("fourier: theta0/rho dimension mismatch");
  for (const double v : req.theta0)
    if (!std::isfinite(v))
      throw std::domain_error("fourier: non-finite theta0");
}

void validate_mode(const FourierRequest& req, const std::vector<int>& s) {
  if (s.size() != req.rho.dimension())
    throw std::invalid_argument("fourier: mode/rotation dimension mismatch");
}

dd mode_rotation_dot(const std::vector<int>& s,
                     const std::vector<double>& rho) {
  DDAccumulator dot;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == 0) continue;
    dot.add(two_prod(static_cast<double>(s[j]), rho[j]));
  }
  return dot.value_dd();
}

double mode_l1(const std::vector<int>& s) {
  double norm = 0.0;
  for (const int v : s) norm += std::abs(static_cast<double>(v));
  return norm;
}

// Core extraction; the summation path deliberately mirrors weighted_average
// so the s = 0 mode (phase factors exactly 1) reproduces it bit for bit.
std::vector<std::complex<double>> extract_mode(const FourierRequest& req,
                                               const std::vector<int>& s,
                                               Precision precision) {
  const std::int64_t n = req.n_points();
  const int m = req.point_dim;
  const dd kappa = mode_rotation_dot(s, req.rho.components);
  const dd theta_dot = mode_rotation_dot(s, req.theta0);
  const dd_sincos pre0 = dd_sincospi2(dd_frac(theta_dot));

  std::vector<std::complex<double>> out(static_cast<std::size_t>(m));

  if (precision == Precision::Extended) {
    std::vector<DDAccumulator> re(static_cast<std::size_t>(m));
    std::vector<DDAccumulator> im(static_cast<std::size_t>(m));
    DDAccumulator norm;
    for (std::int64_t i = 0; i < n; ++i) {
      const dd x =
          dd_div(dd_from(static_cast<double>(i)), static_cast<double>(n));
      const dd w = eval_weight_dd(req.spec, x);
      norm.add(w);
      if (w.hi == 0.0 && w.lo == 0.0) continue;
      const dd phi = dd_frac(dd_mul(kappa, static_cast<double>(i)));
      const dd_sincos sc = dd_sincospi2(phi);
      const double* p = &req.orbit[static_cast<std::size_t>(i) *
                                   static_cast<std::size_t>(m)];
      for (int j = 0; j < m; ++j) {
        const dd wp = dd_mul(w, dd_from(p[j]));
        re[static_cast<std::size_t>(j)].add(dd_mul(wp, sc.cos));
        im[static_cast<std::size_t>(j)].add(dd_neg(dd_mul(wp, sc.sin)));
      }
    }
    const dd a = norm.value_dd();
    if (!(a.hi > 0.0))
      throw std::runtime_error("fourier: degenerate weight sum");
    const dd pre_re = pre0.cos;
    const dd pre_im = dd_neg(pre0.sin);
    for (int j = 0; j < m; ++j) {
      const dd vr = dd_div(re[static_cast<std::size_t>(j)].value_dd(), a);
      const dd vi = dd_div(im[static_cast<std::size_t>(j)].value_dd(), a);
      const dd or_ = dd_sub(dd_mul(vr, pre_re), dd_mul(vi, pre_im));
      const dd oi_ = dd_add(dd_mul(vr, pre_im), dd_mul(vi, pre_re));
      out[static_cast<std::size_t>(j)] = {dd_to_double(or_),
                                          dd_to_double(oi_)};
    }
    return out;
  }

  std::vector<Accumulator> re(static_cast<std::size_t>(m));
  std::vector<Accumulator> im(static_cast<std::size_t>(m));
  Accumulator norm;
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    const double w = eval_weight(req.spec, x);
    norm.add(w);
    if (w == 0.0) continue;
    const dd phi = dd_frac(dd_mul(kappa, static_cast<double>(i)));
    const dd_sincos sc = dd_sincospi2(phi);
    const double c = sc.cos.hi;
    const double sn = sc.sin.hi;
    const double* p = &req.orbit[static_cast<std::size_t>(i) *
                                 static_cast<std::size_t>(m)];
    for (int j = 0; j < m; ++j) {
      re[static_cast<std::size_t>(j)].add(w * p[j] * c);
      im[static_cast<std::size_t>(j)].add(-(w * p[j] * sn));
    }
  }
  const double a = norm.value();
  if (!(a > 0.0)) throw std::runtime_error("fourier: degenerate weight sum");
  const double pre_re = pre0.cos.hi;
  const double pre_im = -pre0.sin.hi;
  for (int j = 0; j < m; ++j) {
    const double vr = re[static_cast<std::size_t>(j)].value() / a;
    const double vi = im[static_cast<std::size_t>(j)].value() / a;
    out[static_cast<std::size_t>(j)] = {vr * pre_re - vi * pre_im,
                                        vr * pre_im + vi * pre_re};
  }
  return out;
}

cpp_rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("exact_rational: non-finite");
  if (x == 0.0) return cpp_rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto num = static_cast<std::int64_t>(std::ldexp(m, 53));
  const int shift = e - 53;
  if (shift >= 0) return cpp_rational(cpp_int(num) << shift);
  return cpp_rational(cpp_int(num), cpp_int(1) << -shift);
}

// min(p,q) / ((d+1) min(p,q) + 1), exact in the double parameter values
cpp_rational budget_supremum(int d, const WeightSpec& spec) {
  const cpp_rational p = exact_rational(spec.p);
  const cpp_rational q = exact_rational(spec.q);
  const cpp_rational minpq = p < q ? p : q;
  return minpq / ((d + 1) * minpq + 1);
}

void enumerate_modes(int d, int max_l1, std::vector<int>& cur,
                     std::size_t idx, int rem,
                     std::vector<std::vector<int>>& out) {
  if (idx + 1 == cur.size()) {
    for (int v = -rem; v <= rem; ++v) {
      cur[idx] = v;
      out.push_back(cur);
    }
    return;
  }
  for (int v = -rem; v <= rem; ++v) {
    cur[idx] = v;
    enumerate_modes(d, max_l1, cur, idx + 1, rem - std::abs(v), out);
  }
}

}  // namespace

std::vector<std::complex<double>> weighted_fourier_coeff(
    const FourierRequest& req, const std::vector<int>& s,
    Precision precision) {
  validate_request(req);
  validate_mode(req, s);
  return extract_mode(req, s, precision);
}

double effective_order_budget(std::int64_t n_steps, int d,
                              const WeightSpec& spec, double zeta) {
  if (n_steps < 2)
    throw std::invalid_argument("effective_order_budget: need n_steps >= 2");
  if (d < 1)
    throw std::invalid_argument("effective_order_budget: need d >= 1");
  if (spec.kind != WeightKind::BumpPQ)
    throw std::invalid_argument(
        "effective_order_budget: budget theory covers BumpPQ weights only");
  if (!std::isfinite(zeta))
    throw std::invalid_argument("effective_order_budget: non-finite zeta");

  const cpp_rational sup = budget_supremum(d, spec);
  const cpp_rational z = exact_rational(zeta);
  if (!(z > 0 && z < sup)) {
    std::ostringstream msg;
    msg << "effective_order_budget: zeta = " << zeta
        << " outside the admissible interval (0, "
        << boost::multiprecision::numerator(sup) << "/"
        << boost::multiprecision::denominator(sup)
        << " ~= " << sup.convert_to<double>() << ")";
    throw std::invalid_argument(msg.str());
  }
  return std::pow(static_cast<double>(n_steps), zeta);
}

double effective_order_budget_log(std::int64_t n_steps, double eta,
                                  double zeta7) {
  if (n_steps < 2)
    throw std::invalid_argument(
        "effective_order_budget_log: need n_steps >= 2");
  if (!(std::isfinite(eta) && eta > 1.0))
    throw std::invalid_argument(
        "effective_order_budget_log: eta must exceed 1 for a nonempty "
        "admissible interval");
  if (!(std::isfinite(zeta7) && zeta7 >= 2.0 && zeta7 < 1.0 + eta)) {
    std::ostringstream msg;
    msg << "effective_order_budget_log: zeta7 = " << zeta7
        << " outside the admissible interval [2, " << 1.0 + eta << ")";
    throw std::invalid_argument(msg.str());
  }
  return std::pow(std::log(static_cast<double>(n_steps)), zeta7);
}

FourierResult fourier_spectrum(const FourierRequest& req, int max_l1_order,
                               Precision precision, int threads, double zeta) {
  validate_request(req);
  if (max_l1_order < 0 && req.modes.empty())
    throw std::invalid_argument("fourier_spectrum: negative mode order");

  const int d = static_cast<int>(req.rho.dimension());
  const std::int64_t n = req.n_points();
  const int m = req.point_dim;

  FourierResult out;
  out.n_used = n;
  if (req.spec.kind == WeightKind::BumpPQ) {
    double z = zeta;
    if (z == 0.0) z = 0.5 * budget_supremum(d, req.spec).convert_to<double>();
    out.budget = effective_order_budget(n, d, req.spec, z);
    out.zeta_used = z;
  } else {
    if (zeta != 0.0)
      throw std::invalid_argument(
          "fourier_spectrum: explicit zeta requires a BumpPQ weight");
    out.budget = std::numeric_limits<double>::infinity();
    out.zeta_used = 0.0;
  }

  std::vector<std::vector<int>> modes = req.modes;
  if (modes.empty()) {
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    enumerate_modes(d, max_l1_order, cur, 0, max_l1_order, modes);
  }
  for (const auto& s : modes) validate_mode(req, s);

  out.modes.resize(modes.size());
  detail::parallel_for(modes.size(), threads, [&](std::size_t i) {
    FourierModeResult r;
    r.s = modes[i];
    r.coeff = extract_mode(req, modes[i], precision);
    r.beyond_effective = mode_l1(modes[i]) >= kEffectiveOrderSafety * out.budget;
    out.modes[i] = std::move(r);
  });

  // Reconstruction diagnostic on every 97th index: misfit between the orbit
  // and the coefficient series, then each mode's projection onto the misfit.
  std::vector<std::int64_t> held;
  for (std::int64_t i = 0; i < n; i += 97) held.push_back(i);
  const std::size_t nm = out.modes.size();
  std::vector<dd> kappas(nm), theta_dots(nm);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    kappas[mi] = mode_rotation_dot(out.modes[mi].s, req.rho.components);
    theta_dots[mi] = mode_rotation_dot(out.modes[mi].s, req.theta0);
  }
  std::vector<double> misfit(held.size() * static_cast<std::size_t>(m));
  std::vector<double> phases_c(held.size() * nm), phases_s(held.size() * nm);
  Accumulator sq;
  for (std::size_t hi = 0; hi < held.size(); ++hi) {
    const std::int64_t i = held[hi];
    std::vector<Accumulator> rec(static_cast<std::size_t>(m));
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const dd phi = dd_frac(
          dd_add(theta_dots[mi], dd_mul(kappas[mi], static_cast<double>(i))));
      const dd_sincos sc = dd_sincospi2(phi);
      phases_c[hi * nm + mi] = sc.cos.hi;
      phases_s[hi * nm + mi] = sc.sin.hi;
      for (int j = 0; j < m; ++j) {
        const std::complex<double>& c =
            out.modes[mi].coeff[static_cast<std::size_t>(j)];
        rec[static_cast<std::size_t>(j)].add(c.real() * sc.cos.hi -
                                             c.imag() * sc.sin.hi);
      }
    }
    const double* p =
        &req.orbit[static_cast<std::size_t>(i) * static_cast<std::size_t>(m)];
    for (int j = 0; j < m; ++j) {
      const double r = p[j] - rec[static_cast<std::size_t>(j)].value();
      misfit[hi * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
          r;
      sq.add(r * r);
    }
  }
  const double denom =
      static_cast<double>(held.size()) * static_cast<double>(m);
  out.reconstruction_residual = std::sqrt(sq.value() / denom);

  for (std::size_t mi = 0; mi < nm; ++mi) {
    Accumulator norm2;
    for (int j = 0; j < m; ++j) {
      Accumulator pr, pi;
      for (std::size_t hi = 0; hi < held.size(); ++hi) {
        const double v =
            misfit[hi * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(j)];
        pr.add(v * phases_c[hi * nm + mi]);
        pi.add(-(v * phases_s[hi * nm + mi]));
      }
      const double a = pr.value() / static_cast<double>(held.size());
      const double b = pi.value() / static_cast<double>(held.size());
      norm2.add(a * a + b * b);
    }
    out.modes[mi].residual = std::sqrt(norm2.value());
  }
  return out;
}

}  // namespace wba
