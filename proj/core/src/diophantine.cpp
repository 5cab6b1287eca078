// SPDX-License-Identifier: MIT
#include "wba/diophantine.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wba/accum.hpp"

namespace wba {
namespace {

using boost::multiprecision::cpp_int;

// Quotients beyond this cannot be represented; a quotient this large also
// means the previous convergent already matches x beyond double precision.
constexpr std::int64_t kQuotientCap = std::int64_t{1} << 62;

constexpr double kResonanceEps = 1e-13;
constexpr double kMaxScanRows = 2e7;

dd dd_from_i64(std::int64_t v) {
  const double hi = static_cast<double>(v);
  const double lo =
      static_cast<double>(static_cast<__int128>(v) - static_cast<__int128>(hi));
  return {hi, lo};
}

double distance_to_integers(const std::vector<int>& k,
                            const std::vector<double>& rho) {
  DDAccumulator dot;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    dot.add(two_prod(static_cast<double>(k[j]), rho[j]));
  }
  const dd f = dd_frac(dot.value_dd());
  const dd dist = (f.hi <= 0.5) ? f : dd_sub(dd_from(1.0), f);
  return dd_to_double(dist);
}

// Signed lattice vectors of exact l1 norm `rem` filled into cur[idx..],
// emitted in ascending lexicographic order; `emit` sees every completion.
template <typename Fn>
void fill_shell(std::vector<int>& cur, std::size_t idx, int rem,
                const Fn& emit) {
  if (idx + 1 == cur.size()) {
    if (rem == 0) {
      cur[idx] = 0;
      emit(cur);
    } else {
      cur[idx] = -rem;
      emit(cur);
      cur[idx] = rem;
      emit(cur);
    }
    return;
  }
  for (int v = -rem; v <= rem; ++v) {
    cur[idx] = v;
    fill_shell(cur, idx + 1, rem - std::abs(v), emit);
  }
}

bool canonical(const std::vector<int>& k) {
  for (const int v : k) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // the zero vector is never scanned
}

// Lattice points with l1 norm exactly s in dimension d.
double shell_count(int d, int s) {
  double total = 0.0;
  double binom_dj = static_cast<double>(d);  // C(d, j), starting at j = 1
  for (int j = 1; j <= std::min(d, s); ++j) {
    // C(s-1, j-1) ways to split s into j positive parts, 2^j sign choices
    double parts = 1.0;
    for (int i = 1; i < j; ++i)
      parts *= static_cast<double>(s - i) / static_cast<double>(i);
    total += std::ldexp(binom_dj * parts, j);
    binom_dj *= static_cast<double>(d - j) / static_cast<double>(j + 1);
  }
  return total;
}

}  // namespace

ContinuedFraction continued_fraction(double x, int depth) {
  if (!std::isfinite(x) || !(x > 0.0 && x < 1.0))
    throw std::domain_error("continued_fraction: x must lie in (0,1)");
  if (depth < 1 || depth > 40)
    throw std::invalid_argument(
        "continued_fraction: depth must be in [1,40]; deeper quotients of a "
        "double carry no information");

  // Euclid on the exact rational value of the double, so rational inputs
  // terminate exactly instead of drifting through near-integer reciprocals.
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
  const auto num = cpp_int(static_cast<std::int64_t>(std::ldexp(m, 53)));
  const cpp_int den = cpp_int(1) << (53 - e);

  ContinuedFraction out;
  cpp_int a = den, b = num;  // expansion of b/a with 0 < b < a
  for (int i = 0; i < depth; ++i) {
    const cpp_int quot = a / b;
    const cpp_int rem = a % b;
    if (quot > kQuotientCap) {
      out.exact = true;  // previous convergent matches beyond precision
      break;
    }
    out.quotients.push_back(static_cast<std::int64_t>(quot));
    if (rem == 0) {
      out.exact = true;
      break;
    }
    a = b;
    b = rem;
  }
  return out;
}

RotationFromCF rotation_from_quotients(
    const std::vector<std::int64_t>& quotients) {
  if (quotients.empty())
    throw std::invalid_argument("rotation_from_quotients: empty quotients");
  for (const std::int64_t a : quotients)
    if (a < 1)
      throw std::invalid_argument(
          "rotation_from_quotients: partial quotients must be >= 1");

  RotationFromCF out;
  // p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1 for x = [0; a_1, a_2, ...]
  std::int64_t pm1 = 1, p0 = 0, qm1 = 0, q0 = 1;
  for (const std::int64_t a : quotients) {
    std::int64_t p1 = 0, q1 = 0, t = 0;
    const bool overflow = __builtin_mul_overflow(a, p0, &t) ||
                          __builtin_add_overflow(t, pm1, &p1) ||
                          __builtin_mul_overflow(a, q0, &t) ||
                          __builtin_add_overflow(t, qm1, &q1);
    if (overflow) {
      out.truncated = true;
      break;
    }
    pm1 = p0;
    p0 = p1;
    qm1 = q0;
    q0 = q1;
    out.convergents.push_back({p1, q1});
    ++out.terms_used;
  }
  const double value =
      dd_to_double(dd_div(dd_from_i64(p0), dd_from_i64(q0)));
  out.rotation = make_rotation({value});
  return out;
}

SmallDivisorScan small_divisor_scan(const Rotation& rho, int k_max) {
  const int d = static_cast<int>(rho.dimension());
  if (d < 1) throw std::invalid_argument("small_divisor_scan: empty rotation");
  if (k_max < 1)
    throw std::invalid_argument("small_divisor_scan: k_max must be >= 1");
  if (d == 1 && k_max > 10000)
    throw std::invalid_argument(
        "small_divisor_scan: d=1 budget is k_max <= 10^4");
  if (d >= 2 && k_max > 30)
    throw std::invalid_argument(
        "small_divisor_scan: d>=2 budget is |k|_l1 <= 30");
  if (d >= 2) {
    double rows = 0.0;
    for (int s = 1; s <= k_max; ++s) rows += shell_count(d, s);
    if (rows > kMaxScanRows)
      throw std::invalid_argument(
          "small_divisor_scan: budget exceeded (too many lattice points)");
  }

  SmallDivisorScan out;
  out.k_max = k_max;
  out.gamma = std::numeric_limits<double>::quiet_NaN();
  out.tau = std::numeric_limits<double>::quiet_NaN();

  double best = std::numeric_limits<double>::infinity();
  const auto visit = [&](const std::vector<int>& k, double norm) -> bool {
    const double div = distance_to_integers(k, rho.components);
    if (div < kResonanceEps) {
      out.resonant = true;
      out.resonant_k = k;
      return false;
    }
    ScanRow row;
    row.k = k;
    row.k_norm = norm;
    row.divisor = div;
    row.record = (div < best);
    if (row.record) best = div;
    out.rows.push_back(std::move(row));
    return true;
  };

  if (d == 1) {
    for (int k = 1; k <= k_max; ++k)
      if (!visit({k}, static_cast<double>(k))) break;
  } else {
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    for (int s = 1; s <= k_max && !out.resonant; ++s) {
      bool aborted = false;
      fill_shell(cur, 0, s, [&](const std::vector<int>& k) {
        if (aborted || !canonical(k)) return;
        if (!visit(k, static_cast<double>(s))) aborted = true;
      });
    }
  }

  if (out.resonant) return out;

  // tau from least squares over the record rows in log-log coordinates
  std::vector<double> xs, ys;
  for (const ScanRow& r : out.rows) {
    if (!r.record) continue;
    xs.push_back(std::log(r.k_norm));
    ys.push_back(std::log(r.divisor));
  }
  if (xs.size() < 2) {
    out.tau = 0.0;
  } else {
    Accumulator mx, my;
    for (const double v : xs) mx.add(v);
    for (const double v : ys) my.add(v);
    const double xb = mx.value() / static_cast<double>(xs.size());
    const double yb = my.value() / static_cast<double>(ys.size());
    Accumulator sxx, sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx.add((xs[i] - xb) * (xs[i] - xb));
      sxy.add((xs[i] - xb) * (ys[i] - yb));
    }
    out.tau = -sxy.value() / sxx.value();
  }

  // gamma is the tightest constant over every row, then nudged down until
  // divisor >= gamma * k_norm^{-tau} verifies in floating point as well
  double gamma = std::numeric_limits<double>::infinity();
  for (const ScanRow& r : out.rows)
    gamma = std::min(gamma, r.divisor * std::pow(r.k_norm, out.tau));
  for (bool clean = false; !clean;) {
    clean = true;
    for (const ScanRow& r : out.rows) {
      if (r.divisor < gamma * std::pow(r.k_norm, -out.tau)) {
        gamma = std::nextafter(gamma, 0.0);
        clean = false;
      }
    }
  }
  out.gamma = gamma;
  return out;
}

double nonresonance_product(const std::vector<int>& k, double tau) {
  if (k.empty() || k.size() > 8)
    throw std::invalid_argument(
        "nonresonance_product: truncated lattice supports dimension 1..8");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("nonresonance_product: tau must be > 0");
  double prod = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double bracket = std::max(1.0, static_cast<double>(j));
    prod *= 1.0 + std::pow(bracket, tau) *
                      std::pow(std::abs(static_cast<double>(k[j])), tau);
  }
  return 1.0 / prod;
}

double spatial_norm(const std::vector<int>& k, double eta) {
  if (k.empty() || k.size() > 8)
    throw std::invalid_argument(
        "spatial_norm: truncated lattice supports dimension 1..8");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("spatial_norm: eta must be >= 0");
  Accumulator acc;
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double bracket = std::max(1.0, static_cast<double>(j));
    acc.add(std::pow(bracket, eta) * std::abs(static_cast<double>(k[j])));
  }
  return acc.value();
}

}  // namespace wba
