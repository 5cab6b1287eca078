// SPDX-License-Identifier: MIT
#include "wba/averaging.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace wba {

namespace {

void check_args(const SignalSource& signal, std::int64_t n_steps) {
  if (n_steps < 2) throw std::invalid_argument("averaging needs n_steps >= 2");
  if (n_steps > signal.max_len())
    throw std::domain_error("signal is shorter than the requested n_steps");
}

}  // namespace

std::vector<double> weighted_average(const SignalSource& signal,
                                     const WeightSpec& spec,
                                     std::int64_t n_steps, Precision precision) {
  if (precision == Precision::Extended) {
    const std::vector<dd> v = weighted_average_dd(signal, spec, n_steps);
    std::vector<double> out(v.size());
    for (size_t j = 0; j < v.size(); ++j) out[j] = dd_to_double(v[j]);
    return out;
  }
  check_args(signal, n_steps);
  const int m = signal.value_dim();
  const double N = static_cast<double>(n_steps);
  std::vector<Accumulator> acc(m);
  Accumulator norm;
  std::vector<double> buf(m);
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const double w = eval_weight(spec, static_cast<double>(n) / N);
    norm.add(w);
    if (w == 0.0) continue;  // adding an exact zero never changes the state
    signal.sample(n, buf.data());
    for (int j = 0; j < m; ++j) acc[j].add(w * buf[j]);
  }
  const double a = norm.value();
  if (!(a > 0.0))
    throw std::runtime_error("degenerate normalizer: weights sum to zero");
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = acc[j].value() / a;
  return out;
}

std::vector<dd> weighted_average_dd(const SignalSource& signal,
                                    const WeightSpec& spec,
                                    std::int64_t n_steps) {
  check_args(signal, n_steps);
  const int m = signal.value_dim();
  const dd N = dd_from(static_cast<double>(n_steps));
  std::vector<DDAccumulator> acc(m);
  DDAccumulator norm;
  std::vector<dd> buf(m);
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const dd x = dd_div(dd_from(static_cast<double>(n)), N);
    const dd w = eval_weight_dd(spec, x);
    norm.add(w);
    if (w.hi == 0.0 && w.lo == 0.0) continue;
    signal.sample_dd(n, buf.data());
    for (int j = 0; j < m; ++j) acc[j].add(dd_mul(w, buf[j]));
  }
  const dd a = norm.value_dd();
  if (!(a.hi > 0.0))
    throw std::runtime_error("degenerate normalizer: weights sum to zero");
  std::vector<dd> out(m);
  for (int j = 0; j < m; ++j) out[j] = dd_div(acc[j].value_dd(), a);
  return out;
}

std::vector<double> unweighted_average(const SignalSource& signal,
                                       std::int64_t n_steps) {
  check_args(signal, n_steps);
  const int m = signal.value_dim();
  std::vector<Accumulator> acc(m);
  std::vector<double> buf(m);
  for (std::int64_t n = 0; n < n_steps; ++n) {
    signal.sample(n, buf.data());
    for (int j = 0; j < m; ++j) acc[j].add(buf[j]);
  }
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j)
    out[j] = acc[j].value() / static_cast<double>(n_steps);
  return out;
}

namespace {

// One composite-midpoint pass with `cells` cells over [0, horizon].
std::vector<double> midpoint_pass(const FlowSampler& flow, const WeightSpec& spec,
                                  double horizon, std::int64_t cells) {
  const int m = flow.value_dim;
  const double h = horizon / static_cast<double>(cells);
  std::vector<Accumulator> acc(m);
  Accumulator norm;
  std::vector<double> buf(m);
  for (std::int64_t i = 0; i < cells; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * h;
    const double w = eval_weight(spec, t / horizon);
    norm.add(w);
    if (w == 0.0) continue;
    flow.map(t, buf.data());
    for (int j = 0; j < m; ++j) {
      if (!std::isfinite(buf[j]))
        throw std::domain_error("flow sample is non-finite");
      acc[j].add(w * buf[j]);
    }
  }
  // (1/N) integral w(s/N) f ds = h/N * sum w f; dividing by h*sum(w) instead
  // normalizes the weight mass exactly like the discrete engine.
  const double a = norm.value();
  if (!(a > 0.0))
    throw std::runtime_error("degenerate normalizer: weights sum to zero");
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) out[j] = acc[j].value() / a;
  return out;
}

}  // namespace

ContinuousAverage weighted_average_continuous(const FlowSampler& flow,
                                              const WeightSpec& spec,
                                              double horizon, double step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be positive and finite");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (horizon / step > 1e8)
    throw std::invalid_argument("sample budget exceeded: horizon/step > 1e8");
  std::int64_t cells = static_cast<std::int64_t>(std::llround(horizon / step));
  if (cells < 2) cells = 2;
  if (cells % 2 != 0) ++cells;  // keep the half-resolution pass aligned
  const std::vector<double> fine = midpoint_pass(flow, spec, horizon, cells);
  const std::vector<double> coarse = midpoint_pass(flow, spec, horizon, cells / 2);
  double est = 0.0;
  for (size_t j = 0; j < fine.size(); ++j)
    est = std::max(est, std::fabs(fine[j] - coarse[j]) / 3.0);
  ContinuousAverage out;
  out.value = fine;
  out.quad_error_estimate = est;
  return out;
}

ErrorCurve error_curve(const SignalSource& signal, const WeightSpec& spec,
                       const std::vector<std::int64_t>& n_grid,
                       const std::vector<double>& reference,
                       Precision precision, int threads) {
  if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("n_grid must be strictly increasing");
  if (static_cast<int>(reference.size()) != signal.value_dim())
    throw std::invalid_argument("reference dimension mismatch");

  ErrorCurve curve;
  curve.n_grid = n_grid;
  curve.reference = reference;
  curve.floor = precision_floor(precision);
  curve.errors.assign(n_grid.size(), 0.0);
  curve.floor_flag.assign(n_grid.size(), false);

  detail::parallel_for(
      static_cast<std::int64_t>(n_grid.size()), threads,
      [&](std::int64_t i) {
        double err = 0.0;
        if (precision == Precision::Extended) {
          const std::vector<dd> v =
              weighted_average_dd(signal, spec, n_grid[i]);
          for (size_t j = 0; j < v.size(); ++j) {
            const dd e = dd_sub(v[j], dd_from(reference[j]));
            err = std::max(err, std::fabs(dd_to_double(e)));
          }
        } else {
          const std::vector<double> v =
              weighted_average(signal, spec, n_grid[i]);
          for (size_t j = 0; j < v.size(); ++j)
            err = std::max(err, std::fabs(v[j] - reference[j]));
        }
        curve.floor_flag[i] = err < curve.floor;
        curve.errors[i] = std::max(err, curve.floor);
      });
  return curve;
}

namespace {

bool is_power_of_ten(std::int64_t n) {
  if (n < 10) return false;
  while (n % 10 == 0) n /= 10;
  return n == 1;
}

}  // namespace

ToeplitzResult toeplitz_counterexample(std::int64_t n_steps) {
  if (n_steps < 10) throw std::invalid_argument("toeplitz demo needs N >= 10");
  const WeightSpec spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const double N = static_cast<double>(n_steps);
  Accumulator wsum, wnorm, usum;
  bool b_prev = false;  // b_{-1}
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const bool b = is_power_of_ten(n);
    const double a = static_cast<double>(n) * (b ? 1.0 : 0.0) -
                     static_cast<double>(n - 1) * (b_prev ? 1.0 : 0.0);
    b_prev = b;
    usum.add(a);
    const double w = eval_weight(spec, static_cast<double>(n) / N);
    wnorm.add(w);
    if (w != 0.0 && a != 0.0) wsum.add(w * a);
  }
  ToeplitzResult r;
  r.unweighted = usum.value() / N;
  r.weighted = wsum.value() / wnorm.value();
  return r;
}

}  // namespace wba
