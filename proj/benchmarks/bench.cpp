// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wba/averaging.hpp"
#include "wba/dynamics.hpp"
#include "wba/fourier.hpp"
#include "wba/stochastic.hpp"
#include "wba/weights.hpp"

namespace {

using namespace wba;

SignalPtr quasi_periodic_signal() {
  auto poly = make_sin_cos_observable();
  auto rho = make_rotation({1.0 / (2.0 * M_PI)});
  return make_orbit_signal(poly, rho, {0.0});
}

void BM_weighted_average_standard(benchmark::State& state) {
  auto sig = quasi_periodic_signal();
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const std::int64_t n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_average(*sig, spec, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_weighted_average_standard)->Arg(4096);

void BM_weighted_average_extended(benchmark::State& state) {
  auto sig = quasi_periodic_signal();
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const std::int64_t n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        weighted_average(*sig, spec, n, Precision::Extended));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_weighted_average_extended)->Arg(4096);

void BM_normalizer(benchmark::State& state) {
  auto spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(normalizer(spec, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_normalizer)->Arg(4096)->Arg(65536);

void BM_orbit_sample(benchmark::State& state) {
  auto sig = quasi_periodic_signal();
  std::int64_t i = 0;
  double v = 0.0;
  for (auto _ : state) {
    sig->sample(i++ & 0xffff, &v);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_orbit_sample);

void BM_fourier_mode(benchmark::State& state) {
  auto sig = quasi_periodic_signal();
  const std::int64_t n = 4096;
  FourierRequest req;
  req.point_dim = 1;
  req.rho = make_rotation({1.0 / (2.0 * M_PI)});
  req.theta0 = {0.0};
  req.spec = make_weight(WeightKind::BumpPQ, 1.0, 1.0);
  req.orbit.resize(n);
  for (std::int64_t i = 0; i < n; ++i) sig->sample(i, &req.orbit[i]);
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_fourier_coeff(req, {1}));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_fourier_mode);

void BM_counter_rng(benchmark::State& state) {
  CounterRng rng(42, 7);
  std::uint64_t c = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform01(c++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_counter_rng);

void BM_clt_sampler(benchmark::State& state) {
  WeightedSumSampler sampler;
  sampler.distribution = Distribution::UniformSym;
  sampler.n_terms = 100;
  sampler.seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_clt_distance(sampler, 2000, 1));
  state.SetItemsProcessed(state.iterations() * 2000 * 100);
}
BENCHMARK(BM_clt_sampler);

}  // namespace

BENCHMARK_MAIN();
