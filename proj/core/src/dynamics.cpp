// SPDX-License-Identifier: MIT
#include "wba/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "wba/ddmath.hpp"

namespace wba {

Rotation make_rotation(std::vector<double> components) {
  if (components.empty())
    throw std::invalid_argument("rotation needs at least one component");
  for (double& c : components) {
    if (!std::isfinite(c))
      throw std::domain_error("rotation components must be finite");
    c -= std::floor(c);
    if (c >= 1.0) c = 0.0;  // guards the floor(1-eps) rounding edge
  }
  Rotation r;
  r.components = std::move(components);
  return r;
}

TrigPoly make_trig_poly(int dimension, int value_dim, bool real_valued) {
  if (dimension < 1 || value_dim < 1)
    throw std::invalid_argument("trig polynomial dimensions must be >= 1");
  TrigPoly f;
  f.dimension = dimension;
  f.value_dim = value_dim;
  f.real_valued = real_valued;
  f.terms.resize(value_dim);
  return f;
}

void set_term(TrigPoly& f, int comp, const std::vector<int>& k,
              std::complex<double> c) {
  if (comp < 0 || comp >= f.value_dim)
    throw std::invalid_argument("component index out of range");
  if (static_cast<int>(k.size()) != f.dimension)
    throw std::invalid_argument("frequency vector has wrong dimension");
  f.terms[comp][k] = c;
}

void set_real_pair(TrigPoly& f, int comp, const std::vector<int>& k,
                   std::complex<double> c) {
  set_term(f, comp, k, c);
  std::vector<int> mk(k.size());
  for (size_t j = 0; j < k.size(); ++j) mk[j] = -k[j];
  f.terms[comp][mk] = std::conj(c);
}

TrigPoly make_sin_cos_observable() {
  TrigPoly f = make_trig_poly(1, 1, true);
  // sin(2 pi x): c_1 = -i/2, c_-1 = i/2; cos(10 pi x): c_5 = c_-5 = 1/2
  set_real_pair(f, 0, {1}, std::complex<double>(0.0, -0.5));
  set_real_pair(f, 0, {5}, std::complex<double>(0.5, 0.0));
  return f;
}

std::vector<dd> translate_dd(const std::vector<double>& theta,
                             const Rotation& rho, std::int64_t n) {
  if (theta.size() != rho.components.size())
    throw std::invalid_argument("theta and rotation dimension mismatch");
  if (n < 0) throw std::invalid_argument("translation count must be >= 0");
  std::vector<dd> out(theta.size());
  const double nd = static_cast<double>(n);
  for (size_t j = 0; j < theta.size(); ++j) {
    const dd prod = two_prod(nd, rho.components[j]);
    out[j] = dd_frac(dd_add(prod, theta[j]));
  }
  return out;
}

std::vector<double> translate(const std::vector<double>& theta,
                              const Rotation& rho, std::int64_t n) {
  const std::vector<dd> t = translate_dd(theta, rho, n);
  std::vector<double> out(t.size());
  for (size_t j = 0; j < t.size(); ++j) {
    double v = dd_to_double(t[j]);
    if (v >= 1.0) v -= 1.0;
    if (v < 0.0) v += 1.0;
    out[j] = v;
  }
  return out;
}

std::vector<std::complex<double>> eval_observable(
    const TrigPoly& f, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != f.dimension)
    throw std::invalid_argument("theta dimension mismatch");
  std::vector<std::complex<double>> out(f.value_dim);
  for (int j = 0; j < f.value_dim; ++j) {
    Accumulator re, im;
    for (const auto& [k, c] : f.terms[j]) {
      dd phase = dd_from(0.0);
      for (int l = 0; l < f.dimension; ++l)
        phase = dd_add(phase, dd_mul(dd_from(theta[l]), static_cast<double>(k[l])));
      const dd_sincos sc = dd_sincospi2(dd_frac(phase));
      const double cs = dd_to_double(sc.cos), sn = dd_to_double(sc.sin);
      re.add(c.real() * cs - c.imag() * sn);
      im.add(c.real() * sn + c.imag() * cs);
    }
    out[j] = {re.value(), im.value()};
  }
  return out;
}

namespace {

double coefficient_scale(const TrigPoly& f) {
  double s = 0.0;
  for (const auto& comp : f.terms)
    for (const auto& [k, c] : comp) s += std::abs(c);
  return s;
}

}  // namespace

void eval_observable_real(const TrigPoly& f, const double* theta, double* out) {
  std::vector<double> th(theta, theta + f.dimension);
  const auto v = eval_observable(f, th);
  const double scale = std::max(1.0, coefficient_scale(f));
  for (int j = 0; j < f.value_dim; ++j) {
    if (f.real_valued && std::fabs(v[j].imag()) > 1e-12 * scale)
      throw std::runtime_error(
          "real-flagged polynomial produced a large imaginary residue");
    out[j] = v[j].real();
  }
}

void eval_observable_real_dd(const TrigPoly& f, const dd* theta, dd* out) {
  for (int j = 0; j < f.value_dim; ++j) {
    DDAccumulator re;
    for (const auto& [k, c] : f.terms[j]) {
      dd phase = dd_from(0.0);
      for (int l = 0; l < f.dimension; ++l)
        phase = dd_add(phase, dd_mul(theta[l], static_cast<double>(k[l])));
      const dd_sincos sc = dd_sincospi2(dd_frac(phase));
      // real part of c * exp(2 pi i <k,theta>)
      re.add(dd_mul(sc.cos, c.real()));
      re.add(dd_mul(sc.sin, -c.imag()));
    }
    out[j] = re.value_dd();
  }
}

std::vector<std::complex<double>> true_average(const TrigPoly& f) {
  std::vector<std::complex<double>> out(f.value_dim, {0.0, 0.0});
  const std::vector<int> zero(f.dimension, 0);
  for (int j = 0; j < f.value_dim; ++j) {
    auto it = f.terms[j].find(zero);
    if (it != f.terms[j].end()) out[j] = it->second;
  }
  return out;
}

void SignalSource::sample_dd(std::int64_t n, dd* out) const {
  std::vector<double> buf(value_dim());
  sample(n, buf.data());
  for (int j = 0; j < value_dim(); ++j) out[j] = dd_from(buf[j]);
}

namespace {

class OrbitSignal final : public SignalSource {
 public:
  OrbitSignal(TrigPoly f, Rotation rho, std::vector<double> theta0)
      : f_(std::move(f)), rho_(std::move(rho)), theta0_(std::move(theta0)) {
    if (static_cast<int>(theta0_.size()) != f_.dimension ||
        rho_.dimension() != f_.dimension)
      throw std::invalid_argument("orbit signal dimension mismatch");
  }
  SignalKind kind() const override { return SignalKind::OrbitObservable; }
  int value_dim() const override { return f_.value_dim; }
  void sample(std::int64_t n, double* out) const override {
    const std::vector<double> th = translate(theta0_, rho_, n);
    eval_observable_real(f_, th.data(), out);
  }
  void sample_dd(std::int64_t n, dd* out) const override {
    const std::vector<dd> th = translate_dd(theta0_, rho_, n);
    eval_observable_real_dd(f_, th.data(), out);
  }
  const TrigPoly& observable() const { return f_; }

 private:
  TrigPoly f_;
  Rotation rho_;
  std::vector<double> theta0_;
};

class PeriodicSignal final : public SignalSource {
 public:
  explicit PeriodicSignal(std::vector<double> values)
      : values_(std::move(values)) {
    if (values_.empty())
      throw std::invalid_argument("periodic table must be non-empty");
    for (double v : values_)
      if (!std::isfinite(v))
        throw std::domain_error("periodic table has non-finite entries");
  }
  SignalKind kind() const override { return SignalKind::PeriodicTable; }
  int value_dim() const override { return 1; }
  void sample(std::int64_t n, double* out) const override {
    out[0] = values_[static_cast<size_t>(n % static_cast<std::int64_t>(values_.size()))];
  }

 private:
  std::vector<double> values_;
};

class RecordedSignal final : public SignalSource {
 public:
  RecordedSignal(std::vector<double> samples, int value_dim)
      : samples_(std::move(samples)), dim_(value_dim) {
    if (dim_ < 1 || samples_.size() % static_cast<size_t>(dim_) != 0)
      throw std::invalid_argument("recorded sample count not a multiple of value_dim");
    if (samples_.empty())
      throw std::invalid_argument("recorded signal must be non-empty");
    for (double v : samples_)
      if (!std::isfinite(v))
        throw std::domain_error("recorded signal has non-finite entries");
  }
  SignalKind kind() const override { return SignalKind::Recorded; }
  int value_dim() const override { return dim_; }
  std::int64_t max_len() const override {
    return static_cast<std::int64_t>(samples_.size() / dim_);
  }
  void sample(std::int64_t n, double* out) const override {
    if (n < 0 || n >= max_len())
      throw std::out_of_range("recorded signal index out of range");
    const double* row = samples_.data() + n * dim_;
    for (int j = 0; j < dim_; ++j) out[j] = row[j];
  }

 private:
  std::vector<double> samples_;
  int dim_;
};

class FlowSignal final : public SignalSource {
 public:
  explicit FlowSignal(FlowSampler flow) : flow_(std::move(flow)) {
    if (!flow_.map) throw std::invalid_argument("flow sampler needs a map");
    if (!(flow_.step > 0.0))
      throw std::invalid_argument("flow sampler step must be positive");
    if (flow_.value_dim < 1)
      throw std::invalid_argument("flow value dimension must be >= 1");
  }
  SignalKind kind() const override { return SignalKind::FlowSampler; }
  int value_dim() const override { return flow_.value_dim; }
  void sample(std::int64_t n, double* out) const override {
    flow_.map(static_cast<double>(n) * flow_.step, out);
  }

 private:
  FlowSampler flow_;
};

}  // namespace

SignalPtr make_orbit_signal(TrigPoly f, Rotation rho, std::vector<double> theta0) {
  return std::make_shared<OrbitSignal>(std::move(f), std::move(rho),
                                       std::move(theta0));
}

SignalPtr make_periodic_signal(std::vector<double> values) {
  return std::make_shared<PeriodicSignal>(std::move(values));
}

SignalPtr make_recorded_signal(std::vector<double> samples, int value_dim) {
  return std::make_shared<RecordedSignal>(std::move(samples), value_dim);
}

SignalPtr make_flow_signal(FlowSampler flow) {
  return std::make_shared<FlowSignal>(std::move(flow));
}

}  // namespace wba
