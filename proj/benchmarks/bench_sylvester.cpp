#include <benchmark/benchmark.h>

#include <random>

#include "adiaband/sylvester.hpp"

using namespace adiaband;

namespace {

SylvesterProblem gapped_problem(int n0, int n1, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  auto herm = [&](int n, double shift) {
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
    RealVector v = es.eigenvalues();
    v = (v.array() - v.minCoeff()) / (v.maxCoeff() - v.minCoeff() + 1e-12) + shift;
    return Matrix(es.eigenvectors() * v.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
  };
  SylvesterProblem p;
  p.K0 = herm(n0, 0.0);
  p.K1 = herm(n1, 1.5);
  p.Y = Matrix::Random(n0, n1);
  p.delta = 0.5;
  return p;
}

}  // namespace

static void BM_SylvesterEigen(benchmark::State& state) {
  const auto p = gapped_problem(state.range(0), state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester_eigen(p));
}
BENCHMARK(BM_SylvesterEigen)->Arg(4)->Arg(16)->Arg(64);

static void BM_SylvesterContour(benchmark::State& state) {
  const auto p = gapped_problem(state.range(0), state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sylvester_contour(p));
}
BENCHMARK(BM_SylvesterContour)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);
