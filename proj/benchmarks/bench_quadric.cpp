#include <benchmark/benchmark.h>

#include "fpgeom/quadform.hpp"

using namespace fpgeom;

static void BM_QuadricCount(benchmark::State& state) {
  const fp_t p = fp_t(state.range(0));
  FieldContext ctx(p);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadric_count(m, 1));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(p) * p);
}
BENCHMARK(BM_QuadricCount)->Arg(13)->Arg(31)->Arg(101);

static void BM_QuadricCountShifted(benchmark::State& state) {
  const fp_t p = fp_t(state.range(0));
  FieldContext ctx(p);
  QuadraticForm m = QuadraticForm::dot_square(ctx, 4);
  QuadricConstraints cons;
  FpVec h(4, 0);
  h[0] = 1;
  cons.shifts.push_back(h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadric_count(m, 1, cons));
  }
}
BENCHMARK(BM_QuadricCountShifted)->Arg(13)->Arg(31);
