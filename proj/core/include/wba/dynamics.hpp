// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "wba/accum.hpp"

// Sequence generators: torus translations, trigonometric-polynomial
// observables, periodic tables, recorded samples and sampled flows.

namespace wba {

struct NonresMeta {
  double gamma = 0.0;
  double tau = 0.0;
  bool set = false;
};

// Rotation vector on the d-torus, componentwise in [0,1).
struct Rotation {
  std::vector<double> components;
  NonresMeta nonres;
  int dimension() const { return static_cast<int>(components.size()); }
};

Rotation make_rotation(std::vector<double> components);

// Finite trigonometric polynomial, possibly vector-valued: terms[j] maps a
// frequency vector k to the complex coefficient of exp(2*pi*i*<k,theta>) in
// output component j.
struct TrigPoly {
  int dimension = 1;
  int value_dim = 1;
  bool real_valued = true;
  std::vector<std::map<std::vector<int>, std::complex<double>>> terms;
};

TrigPoly make_trig_poly(int dimension, int value_dim = 1, bool real_valued = true);

// Sets the coefficient of k in component `comp`.
void set_term(TrigPoly& f, int comp, const std::vector<int>& k,
              std::complex<double> c);

// Sets c at k and conj(c) at -k, keeping the polynomial real-valued.
void set_real_pair(TrigPoly& f, int comp, const std::vector<int>& k,
                   std::complex<double> c);

// sin(2*pi*x) + cos(10*pi*x): the standard quasi-periodic test observable.
TrigPoly make_sin_cos_observable();

// theta + n*rho mod 1 componentwise; the product n*rho_j is formed with an
// exact two-term expansion before reduction so the phase error stays far
// below every measurable convergence floor.
std::vector<double> translate(const std::vector<double>& theta,
                              const Rotation& rho, std::int64_t n);
std::vector<dd> translate_dd(const std::vector<double>& theta,
                             const Rotation& rho, std::int64_t n);

// Sum of c_k exp(2*pi*i*<k,theta>) per component.
std::vector<std::complex<double>> eval_observable(
    const TrigPoly& f, const std::vector<double>& theta);

// Real-valued evaluation; throws if the imaginary residue of a real-flagged
// polynomial exceeds 1e-12 of the coefficient scale.
void eval_observable_real(const TrigPoly& f, const double* theta, double* out);
void eval_observable_real_dd(const TrigPoly& f, const dd* theta, dd* out);

// The zero-frequency coefficient per component.
std::vector<std::complex<double>> true_average(const TrigPoly& f);

enum class SignalKind { OrbitObservable, PeriodicTable, Recorded, FlowSampler };

// Reproducible producer of the averaged sequence: two reads of the same
// index return bit-identical values.
class SignalSource {
 public:
  virtual ~SignalSource() = default;
  virtual SignalKind kind() const = 0;
  virtual int value_dim() const = 0;
  virtual std::int64_t max_len() const {
    return std::numeric_limits<std::int64_t>::max();
  }
  virtual void sample(std::int64_t n, double* out) const = 0;
  // Extended-precision read; defaults to promoting the double samples.
  virtual void sample_dd(std::int64_t n, dd* out) const;
};

using SignalPtr = std::shared_ptr<const SignalSource>;

struct FlowSampler {
  std::function<void(double, double*)> map;  // t -> R^m
  int value_dim = 1;
  double step = 1e-3;
};

SignalPtr make_orbit_signal(TrigPoly f, Rotation rho, std::vector<double> theta0);
SignalPtr make_periodic_signal(std::vector<double> values);
// Row-major samples, n_rows = samples.size() / value_dim.
SignalPtr make_recorded_signal(std::vector<double> samples, int value_dim);
// Element n samples the flow at t = n*step.
SignalPtr make_flow_signal(FlowSampler flow);

}  // namespace wba
