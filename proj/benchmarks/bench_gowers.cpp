#include <benchmark/benchmark.h>

#include "fpgeom/gowers.hpp"
#include "fpgeom/rng.hpp"

using namespace fpgeom;

namespace {

ComplexGrid half_indicator(std::shared_ptr<const SphereGrid> grid) {
  CounterRng rng(7, 0);
  std::vector<std::complex<double>> values(grid->size(), 0.0);
  for (std::size_t v = 0; v < grid->size(); ++v) {
    if (rng.bernoulli(v, 0.5)) values[v] = 1.0;
  }
  return ComplexGrid(std::move(grid), std::move(values));
}

}  // namespace

static void BM_GowersU2(benchmark::State& state) {
  const fp_t p = fp_t(state.range(0));
  FieldContext ctx(p);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 4);
  auto grid = std::make_shared<const SphereGrid>(m, 1);
  ComplexGrid f = half_indicator(grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gowers_norm(f, 2).norm);
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) *
                          std::int64_t(grid->size()) *
                          std::int64_t(grid->size()));
}
BENCHMARK(BM_GowersU2)->Arg(7)->Arg(11)->Arg(13);

static void BM_GowersU3Streamed(benchmark::State& state) {
  FieldContext ctx(5);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 3);
  auto grid = std::make_shared<const SphereGrid>(m, 1);
  ComplexGrid f = half_indicator(grid);
  const std::size_t threads = std::size_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gowers_norm(f, 3, GowersOptions{UINT64_MAX, threads}).norm);
  }
}
BENCHMARK(BM_GowersU3Streamed)->Arg(1)->Arg(2);
