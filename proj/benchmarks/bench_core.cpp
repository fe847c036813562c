#include <benchmark/benchmark.h>

#include <random>

#include "qbench/channels.hpp"
#include "qbench/cv_benchmark.hpp"
#include "qbench/fockla.hpp"
#include "qbench/quadrature.hpp"

using namespace qbench;

namespace {

HermitianOperator random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Mat g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(nd(rng), nd(rng));
  HermitianOperator h;
  h.matrix = 0.5 * (g + g.adjoint());
  return h;
}

void bm_plane_quadrature_build(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PlaneQuadrature q = PlaneQuadrature::build({n, 2 * n, 1.0});
    benchmark::DoNotOptimize(q.max_radius);
  }
}
BENCHMARK(bm_plane_quadrature_build)->Arg(32)->Arg(128)->Arg(512);

void bm_max_eigenvalue_dense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  HermitianOperator h = random_hermitian(n, 7);
  for (auto _ : state) {
    double ev = detail::max_eigenvalue_dense(h.matrix);
    benchmark::DoNotOptimize(ev);
  }
}
BENCHMARK(bm_max_eigenvalue_dense)->Arg(128)->Arg(256)->Arg(512);

void bm_max_eigenvalue_lanczos(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  HermitianOperator h = random_hermitian(n, 7);
  for (auto _ : state) {
    auto evs = detail::top_eigenvalues_iterative(h.matrix, 1);
    benchmark::DoNotOptimize(evs[0]);
  }
}
BENCHMARK(bm_max_eigenvalue_lanczos)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);

void bm_heterodyne_fidelity(benchmark::State& state) {
  const GaussianTask task{1.0, 1.0, 1.0};
  const QuadratureSpec spec{32, 32, 1.0};
  Truncation tr = truncation_for_task(task, spec, 0.5, 1e-6);
  Channel ch = heterodyne_mp_channel(0.5, tr);
  for (auto _ : state) {
    double f = average_fidelity_cv(ch, task, spec, tr);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(bm_heterodyne_fidelity)->Unit(benchmark::kMillisecond);

void bm_benchmark_operator(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) {
    BenchmarkOperatorCv bo =
        benchmark_operator_cv(1.0, 1.0, {32, 32, 1.0}, {dim});
    benchmark::DoNotOptimize(bo.gamma_m.matrix(0, 0));
  }
}
BENCHMARK(bm_benchmark_operator)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
