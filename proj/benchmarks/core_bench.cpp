#include <random>

#include <benchmark/benchmark.h>
#include <holonomy/holonomy.hpp>

using namespace holonomy;
using namespace holonomy::analytic;

namespace {

ComplexMatrix random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

// Companion-like chain with a branch point of order n at z = 0.
MatrixFamily cyclic_family(int n) {
  return MatrixFamily("cyclic", n, 2, [n](const Point& p) {
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = 1.0;
    h(n - 1, 0) = as_complex(p);
    return h;
  });
}

void BM_EigGeneral(benchmark::State& state) {
  const ComplexMatrix h = random_matrix(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(eig_general(h));
}
BENCHMARK(BM_EigGeneral)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_Eig2x2(benchmark::State& state) {
  const ComplexMatrix h = random_matrix(2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(eig_2x2(h));
}
BENCHMARK(BM_Eig2x2);

void BM_MatchEigenvalues(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix a = random_matrix(n, 7);
  const ComplexVector from = a.col(0), to = from + 1e-3 * a.col(1 % n);
  for (auto _ : state) benchmark::DoNotOptimize(match_eigenvalues(from, to));
}
BENCHMARK(BM_MatchEigenvalues)->Arg(3)->Arg(5)->Arg(8)->Arg(16);

void BM_TrackH1(benchmark::State& state) {
  const MatrixFamily h1 = example_family(Example::H1);
  const Curve loop = Curve::circle(complex_point(0.0), 1.0);
  const int n = static_cast<int>(state.range(0));
  TrackOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(track(h1, loop, n, opts));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TrackH1)->RangeMultiplier(4)->Range(256, 16384);

void BM_TrackCyclic(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const MatrixFamily f = cyclic_family(dim);
  const Curve loop = Curve::circle(complex_point(0.0), 1.0);
  TrackOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(track(f, loop, 2048, opts));
}
BENCHMARK(BM_TrackCyclic)->Arg(3)->Arg(5)->Arg(8);

void BM_GeometricPhase(benchmark::State& state) {
  const MatrixFamily f = example_family(Example::NonSymB);
  const SpectralPath path = track(f, Curve::circle(complex_point(0.0), 1.0), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(geometric_phase(path, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeometricPhase)->RangeMultiplier(4)->Range(256, 16384);

void BM_Curvature(benchmark::State& state) {
  const MatrixFamily f = example_family(Example::SpinHalf);
  Point p(3);
  p << 0.3, -0.2, 0.5;
  const auto method = state.range(0) == 0 ? CurvatureMethod::SumOverStates : CurvatureMethod::ExteriorDerivative;
  for (auto _ : state) benchmark::DoNotOptimize(curvature(f, p, 0, 1e-4, method));
}
BENCHMARK(BM_Curvature)->Arg(0)->Arg(1);

void BM_Integrate(benchmark::State& state) {
  const MatrixFamily f = example_family(Example::SpinHalf);
  Point c(3);
  c << 0.0, 0.0, 0.5;
  const Curve loop = Curve::circle(c, 0.8);
  const ComplexVector psi0 = eig_general(f(loop.start())).right.col(0);
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, loop, T, psi0, 1e-10));
}
BENCHMARK(BM_Integrate)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
