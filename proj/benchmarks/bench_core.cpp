#include <benchmark/benchmark.h>

#include "homc/characterize.hpp"
#include "homc/constructions.hpp"
#include "homc/rng.hpp"
#include "homc/solvers.hpp"
#include "homc/tensor.hpp"

using namespace homc;

namespace {

TransitionTensor<double> make_tensor(int n, int m) {
  Rng rng(42);
  const std::int64_t cols = column_count(n, m);
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(cols) * n);
  for (std::int64_t c = 0; c < cols; ++c) {
    auto col = sample_simplex(rng, n);
    data.insert(data.end(), col.begin(), col.end());
  }
  return TransitionTensor<double>(n, m, std::move(data));
}

}  // namespace

static void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  auto P = make_tensor(n, m);
  Rng rng(1);
  std::vector<double> x = sample_simplex(rng, n);
  ApplyWorkspace ws;
  for (auto _ : state) {
    apply_into(P, x, ws);
    benchmark::DoNotOptimize(ws.out.data());
  }
  state.SetItemsProcessed(state.iterations() * P.columns() * n);
}
BENCHMARK(BM_Apply)->Args({4, 2})->Args({4, 3})->Args({6, 2})->Args({10, 3});

static void BM_KronPower(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  Rng rng(2);
  ProbabilityVector<double> x(sample_simplex(rng, n), 1e-9);
  for (auto _ : state) {
    auto k = kron_power(x, m);
    benchmark::DoNotOptimize(k.data());
  }
}
BENCHMARK(BM_KronPower)->Args({4, 3})->Args({10, 4});

static void BM_QuadraticClosedForm(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) {
    auto s = solve_quadratic_2x2(rng.uniform01(), rng.uniform01(), rng.uniform01(), rng.uniform01());
    benchmark::DoNotOptimize(s.roots.data());
  }
}
BENCHMARK(BM_QuadraticClosedForm);

static void BM_UniversalCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  auto P = make_tensor(n, 2);
  for (auto _ : state) {
    auto check = is_universally_stationary(P);
    benchmark::DoNotOptimize(check.universal);
  }
}
BENCHMARK(BM_UniversalCheck)->Arg(3)->Arg(6);

static void BM_GridEnumeration(benchmark::State& state) {
  ConstructionSpec spec;
  spec.n = static_cast<int>(state.range(0));
  spec.m = 2;
  spec.k = spec.n;
  spec.variant = ConstructionVariant::n_plus_1_points;
  auto P = to_double_tensor(build_construction<Rational>(spec));
  GridOptions opts;
  opts.resolution = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto points = enumerate_stationary_grid(P, opts);
    benchmark::DoNotOptimize(points.size());
  }
}
BENCHMARK(BM_GridEnumeration)->Args({3, 60})->Args({4, 40})->Unit(benchmark::kMillisecond);

static void BM_MultiStart(benchmark::State& state) {
  auto P = make_tensor(4, 2);
  SolveOptions opts;
  opts.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto report = multi_start_solve(P, opts);
    benchmark::DoNotOptimize(report.points.size());
  }
}
BENCHMARK(BM_MultiStart)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
