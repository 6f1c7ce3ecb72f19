#include <benchmark/benchmark.h>

#include <cmath>

#include "homog/cell.hpp"
#include "homog/norms.hpp"
#include "homog/periodize.hpp"
#include "homog/unfold.hpp"

using namespace homog;

static void BM_AssembleStiffness(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto grid = build_domain_grid(2, N, 8, make_mask("unit_square", 2, N));
  const MatrixField A = MatrixField::laminate(2, 1.0, 4.0);
  const double inv_eps = 1.0 / grid->eps();
  const CoefficientAt at = [&](const Point& x) { return A.sample({x[0] * inv_eps, x[1] * inv_eps}); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_stiffness(*grid, at, BC::Dirichlet));
  }
  state.SetItemsProcessed(state.iterations() * grid->element_count());
}
BENCHMARK(BM_AssembleStiffness)->Arg(8)->Arg(16);

static void BM_CorrectorSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto grid = build_cell_grid(2, m);
  const MatrixField A = MatrixField::laminate(2, 1.0, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_corrector(A, 0, grid, {}));
  }
}
BENCHMARK(BM_CorrectorSolve)->Arg(32)->Arg(64);

static void BM_UnfoldAverageRoundTrip(benchmark::State& state) {
  auto grid = build_domain_grid(2, 16, 8, make_mask("unit_square", 2, 16));
  const ScalarField phi = sample_nodal(grid, [](const Point& x) { return x[0] * x[1]; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(average(unfold(phi, 8)));
  }
  state.SetItemsProcessed(state.iterations() * grid->node_count());
}
BENCHMARK(BM_UnfoldAverageRoundTrip);

static void BM_QInterp(benchmark::State& state) {
  auto grid = build_domain_grid(2, 16, 16, make_mask("unit_square", 2, 16));
  const ScalarField phi = sample_nodal(grid, [](const Point& x) { return x[0] * x[0] + x[1]; });
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_interp(phi));
  }
}
BENCHMARK(BM_QInterp);

static void BM_FaceHHalfNorm(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<double> v(m + 1);
  for (int j = 0; j <= m; ++j) v[j] = std::sin(3.0 * j / m) + 0.25 * j / m;
  for (auto _ : state) {
    benchmark::DoNotOptimize(face_h_half_norm(v));
  }
}
BENCHMARK(BM_FaceHHalfNorm)->Arg(128)->Arg(512);

static void BM_PeriodizeProject(benchmark::State& state) {
  auto grid = build_cell_grid(2, static_cast<int>(state.range(0)));
  const ScalarField f = sample_nodal(grid, [](const Point& y) { return y[0] + y[0] * y[1]; });
  const PeriodicProjector proj(grid, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(proj.project(f));
  }
}
BENCHMARK(BM_PeriodizeProject)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
