#include <benchmark/benchmark.h>

#include "cubesphere/basis.hpp"
#include "cubesphere/fillball.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/sphere_builder.hpp"
#include "cubesphere/surface_gen.hpp"
#include "cubesphere/transforms.hpp"

using namespace cubesphere;

static void BM_Warmup(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(warmup_complex(m, 2));
  state.SetComplexityN(m);
}
BENCHMARK(BM_Warmup)->DenseRange(2, 10, 2)->Complexity();

static void BM_SquareSurface(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::size_t squares = 0;
  for (auto _ : state) squares = n_square_surface(n).complex.count(2);
  state.counters["squares"] = static_cast<double>(squares);
}
BENCHMARK(BM_SquareSurface)->Arg(31)->Arg(61)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_CanonicalBasis(benchmark::State& state) {
  auto q = n_square_surface(static_cast<int>(state.range(0))).complex;
  for (auto _ : state) benchmark::DoNotOptimize(canonical_basis(q));
}
BENCHMARK(BM_CanonicalBasis)->Arg(31)->Arg(43)->Unit(benchmark::kMillisecond);

// Face counts only, no complex built.
static void BM_RefineCensus(benchmark::State& state) {
  auto q = n_square_surface(static_cast<int>(state.range(0))).complex;
  auto b = canonical_basis(q);
  for (auto _ : state) benchmark::DoNotOptimize(refine_census(q, b));
}
BENCHMARK(BM_RefineCensus)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);

static void BM_RefineWithBasis(benchmark::State& state) {
  auto q = n_square_surface(31).complex;
  auto b = canonical_basis(q);
  for (auto _ : state) benchmark::DoNotOptimize(refine_with_basis(q, b));
}
BENCHMARK(BM_RefineWithBasis)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_BettiTorus(benchmark::State& state) {
  auto t = torus_complex(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(betti_numbers(t, Coefficients::mod(2)));
}
BENCHMARK(BM_BettiTorus)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_BettiIntegerSurface(benchmark::State& state) {
  auto q = n_square_surface(31).complex;
  for (auto _ : state) benchmark::DoNotOptimize(betti_numbers(q, Coefficients::integers()));
}
BENCHMARK(BM_BettiIntegerSurface)->Unit(benchmark::kMillisecond);

static void BM_FillChain(benchmark::State& state) {
  auto s = cube_sphere(2);
  for (int i = 0; i < state.range(0); ++i) s = apply_gadget(s, 2, 0, Gadget::InsertSquare5);
  for (auto _ : state) benchmark::DoNotOptimize(fill_ball(s));
}
BENCHMARK(BM_FillChain)->DenseRange(0, 4);

static void BM_Validate(benchmark::State& state) {
  auto c = warmup_complex(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(validate(c));
}
BENCHMARK(BM_Validate)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Serialize(benchmark::State& state) {
  auto c = warmup_complex(8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(parse_complex(serialize(c)));
}
BENCHMARK(BM_Serialize)->Unit(benchmark::kMillisecond);

static void BM_Sphere3Structural(benchmark::State& state) {
  BuildOptions o;
  o.structural = true;
  for (auto _ : state) benchmark::DoNotOptimize(sphere3(11, state.range(0), o));
}
BENCHMARK(BM_Sphere3Structural)->Arg(8)->Arg(27)->Unit(benchmark::kMillisecond);

static void BM_Induction(benchmark::State& state) {
  auto s = cube_sphere(3);
  for (auto _ : state) benchmark::DoNotOptimize(induct_dimension(s));
}
BENCHMARK(BM_Induction)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
