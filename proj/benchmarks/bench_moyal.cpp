#include <benchmark/benchmark.h>

#include <cmath>

#include "adiaband/formal_symbol.hpp"
#include "adiaband/projector.hpp"
#include "adiaband/test_models.hpp"

using namespace adiaband;

namespace {

FormalSymbol smooth_symbol(const PhaseSpaceGrid& g, int m, int order) {
  FormalSymbol s(g, m, m, 1, order);
  for (int n = 0; n <= order; ++n)
    s.set(n, MatrixField::from_function(g, m, m, [&](double x, double xi) {
            Matrix a(m, m);
            for (int i = 0; i < m; ++i)
              for (int j = 0; j < m; ++j) a(i, j) = Complex(std::cos(x * (i + 1) + xi * j), std::sin(xi - n * x));
            return a;
          }));
  return s;
}

}  // namespace

static void BM_MoyalProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto g = PhaseSpaceGrid::periodic(-M_PI, M_PI, -M_PI, M_PI, n, n, 4);
  const auto a = smooth_symbol(g, 2, order), b = smooth_symbol(g, 2, order);
  for (auto _ : state) benchmark::DoNotOptimize(moyal_product(a, b, order));
  state.SetItemsProcessed(state.iterations() * g.nodes());
}
BENCHMARK(BM_MoyalProduct)->Args({32, 2})->Args({64, 2})->Args({64, 4})->Unit(benchmark::kMillisecond);

static void BM_Hierarchy(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto g = PhaseSpaceGrid::periodic(-2 * M_PI, 2 * M_PI, -2 * M_PI, 2 * M_PI, 64, 64, 8);
  const auto H = two_level_model(g, K);
  for (auto _ : state) benchmark::DoNotOptimize(build_hierarchy(H, GapSpec::bands(0, 0, 1.0), K));
}
BENCHMARK(BM_Hierarchy)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
