#include <benchmark/benchmark.h>

#include "fpgeom/msets.hpp"

using namespace fpgeom;

namespace {

Configuration triangle(const FieldContext& ctx, std::size_t d) {
  std::vector<FpVec> pts;
  for (std::size_t i = 0; i < 3; ++i) {
    FpVec e(d, 0);
    e[i] = 1;
    pts.push_back(e);
  }
  return Configuration(ctx, pts);
}

}  // namespace

static void BM_TriangleVariety(benchmark::State& state) {
  const fp_t p = fp_t(state.range(0));
  FieldContext ctx(p);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 4);
  Configuration x = triangle(ctx, 4);
  MFamily fam = omega_index_family(m, 1, x, {0, 1, 2});
  VarietyScanner scanner(fam);
  std::uint64_t count = 0;
  for (auto _ : state) {
    count = scanner.count(VarietyOptions{UINT64_MAX, 1});
    benchmark::DoNotOptimize(count);
  }
  state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(count));
}
BENCHMARK(BM_TriangleVariety)->Arg(5)->Arg(7)->Arg(11);

static void BM_TriangleVarietyThreads(benchmark::State& state) {
  FieldContext ctx(11);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 4);
  Configuration x = triangle(ctx, 4);
  MFamily fam = omega_index_family(m, 1, x, {0, 1, 2});
  VarietyScanner scanner(fam);
  const std::size_t threads = std::size_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scanner.count(VarietyOptions{UINT64_MAX, threads}));
  }
}
BENCHMARK(BM_TriangleVarietyThreads)->Arg(1)->Arg(2);

static void BM_ProductVariety(benchmark::State& state) {
  FieldContext ctx(5);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 4);
  Configuration x = triangle(ctx, 4);
  MFamily fam = omega_product_family(m, 1, x, {0, 1, 2}, 0);
  VarietyScanner scanner(fam);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scanner.count(VarietyOptions{UINT64_MAX, 2}));
  }
}
BENCHMARK(BM_ProductVariety);
