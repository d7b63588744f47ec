#include <benchmark/benchmark.h>

#include "adiaband/harness.hpp"
#include "adiaband/magnetic_well.hpp"

using namespace adiaband;

static void BM_WeylScalar(benchmark::State& state) {
  const auto base = centered_base(8.0, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        weyl_quantize_scalar_1d([](double x, double xi) { return xi * xi + x * x; }, 0.05, base));
}
BENCHMARK(BM_WeylScalar)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_FiberModel(benchmark::State& state) {
  MagneticWellSpec spec;
  spec.B_dot = Poly2::constant(1.0) + Poly2::monomial(2, 0, 0.25) + Poly2::monomial(0, 2, 0.25);
  const auto sym = magnetic_well_symbol(spec);
  const FockLadder ladder(static_cast<int>(state.range(0)));
  const auto base = centered_base(2.0, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(quantize_fiber_model(sym, ladder, base, 0.01));
}
BENCHMARK(BM_FiberModel)->Args({8, 64})->Args({12, 128})->Unit(benchmark::kMillisecond);

static void BM_Spectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix a = Matrix::Random(n, n);
  a = 0.5 * (a + a.adjoint()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(a, -0.5, 0.5));
}
BENCHMARK(BM_Spectrum)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
