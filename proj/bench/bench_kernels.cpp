/// @file bench_kernels.cpp
/// @brief Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lowmach/kernels.hpp"
#include "lowmach/primitive.hpp"

using namespace lowmach;

namespace {

std::vector<double> random_vector(std::size_t n, double lo, double hi) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void laplacian_box(benchmark::State& state) {
  const Grid g = Grid::cartesian(static_cast<int>(state.range(0)), 4.0, 3.0);
  const auto phi = random_vector(g.size(), -1.0, 1.0);
  const auto c = random_vector(g.size(), 0.5, 2.0);
  const kernels::FaceCoefficients coef{c, c, c};
  std::vector<double> out(g.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::weighted_laplacian(g, phi, coef, out);
    else
      kernels::serial::weighted_laplacian(g, phi, coef, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

template <bool Parallel>
void analyze(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto basis = random_vector(n * n, -1.0, 1.0);
  const auto x = random_vector(n, -1.0, 1.0);
  std::vector<double> out(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::analyze(basis, n, x, out);
    else
      kernels::serial::analyze(basis, n, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<long>(n * n * sizeof(double)));
}

template <bool Parallel>
void primitive_rates(benchmark::State& state) {
  const Grid g = Grid::radial(static_cast<int>(state.range(0)), 16.0, 10.0);
  ScalingParams p;
  p.eps = 0.2;
  const StaticProfile prof = build_profile(PotentialSpec{}, p, g);
  const DataSpec spec{{1.0, 1.0, "gaussian"}, {0.5, 1.0, "gaussian"}, {1.0, 1.5, "gaussian"}};
  const PrimitiveState s = init_ill_prepared(spec.build(g), prof, p, g);
  const PrimitiveSystem sys(prof, p, g, Parallel);
  for (auto _ : state) {
    PrimitiveRates r = sys.rates(s);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

}  // namespace

BENCHMARK(laplacian_box<false>)->Name("laplacian_box/serial")->Arg(32)->Arg(64);
BENCHMARK(laplacian_box<true>)->Name("laplacian_box/omp")->Arg(32)->Arg(64)->UseRealTime();
BENCHMARK(analyze<false>)->Name("analyze/serial")->Arg(512)->Arg(2048);
BENCHMARK(analyze<true>)->Name("analyze/omp")->Arg(512)->Arg(2048)->UseRealTime();
BENCHMARK(primitive_rates<false>)->Name("primitive_rates/serial")->Arg(512)->Arg(8192);
BENCHMARK(primitive_rates<true>)->Name("primitive_rates/omp")->Arg(512)->Arg(8192)->UseRealTime();

BENCHMARK_MAIN();
