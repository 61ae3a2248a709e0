#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "ucover/action.hpp"
#include "ucover/cover.hpp"
#include "ucover/fp_group.hpp"
#include "ucover/integer_matrix.hpp"
#include "ucover/quotient.hpp"

using namespace ucover;

namespace {

IntMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-9, 9);
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
  return m;
}

void BM_SmithNormalForm(benchmark::State& state) {
  const IntMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

// Universal cover of an n-cycle at the scale that sees the loop, out to the
// given radius.
void BM_CycleCover(benchmark::State& state) {
  const FilteredSpace c = from_metric(testing::cycle_distances(12), {2, 1});
  CoverBudget budget;
  budget.radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_cover(c, 2, 0, budget));
}
BENCHMARK(BM_CycleCover)->Arg(8)->Arg(32)->Arg(128);

// Cosets of the trivial subgroup in the von Dyck group (2,3,n).
void BM_CosetEnumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Presentation p;
  p.generators = 2;
  Word ab;
  for (int i = 0; i < n; ++i) ab.insert(ab.end(), {1, 2});
  p.relators = {{1, 1}, {2, 2, 2}, ab};
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cosets(p, {}, 1 << 20));
}
BENCHMARK(BM_CosetEnumeration)->Arg(3)->Arg(4)->Arg(5);

// Fiber quotients of the winding map of a 3k-cycle onto a 3-cycle.
void BM_FiberQuotient(benchmark::State& state) {
  const int n = 3 * static_cast<int>(state.range(0));
  std::vector<Point> wind(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) wind[static_cast<std::size_t>(i)] = i % 3;
  const FilteredMap f = make_map(from_metric(testing::cycle_distances(n), {1}), testing::triangle(), wind);
  for (auto _ : state) benchmark::DoNotOptimize(build_fiber_quotient(f, 1));
}
BENCHMARK(BM_FiberQuotient)->Arg(2)->Arg(8)->Arg(32);

// Saturating a scale under a rotation group until it is invariant.
void BM_SaturateInvariant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Permutation rot(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rot[static_cast<std::size_t>(i)] = (i + 1) % n;
  const FilteredSpace s = from_metric(testing::line_distances(n), {1.0});
  const ActionSpec a = close_group(s, {rot});
  for (auto _ : state) benchmark::DoNotOptimize(saturate_invariant(a, 1));
}
BENCHMARK(BM_SaturateInvariant)->Arg(8)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
