#include <benchmark/benchmark.h>

#include <random>

#include "lrmc/data_io.hpp"
#include "lrmc/masking.hpp"
#include "lrmc/regularizers.hpp"
#include "lrmc/solvers.hpp"
#include "lrmc/svd.hpp"

namespace {

using namespace lrmc;

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      a(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  return a;
}

void bm_truncated_svd(benchmark::State& state) {
  const Index k = state.range(0);
  const Matrix a = random_matrix(600, 400, 1);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_svd(a, k));
}
BENCHMARK(bm_truncated_svd)->Arg(10)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_svt(benchmark::State& state) {
  const Matrix a = random_matrix(600, 400, 2);
  const double lambda = 0.3 * truncated_svd(a, 1).sigma[0];
  for (auto _ : state) benchmark::DoNotOptimize(svt(a, lambda));
}
BENCHMARK(bm_svt)->Unit(benchmark::kMillisecond);

void bm_prox_discrete(benchmark::State& state) {
  const Index m = 800, n = 600;
  const Matrix y = random_matrix(m, n, 3) * 6.0;
  const IndexSet all = IndexSet::all(m, n);
  const Alphabet alpha({1, 2, 3, 4, 5});
  for (auto _ : state) benchmark::DoNotOptimize(prox_discrete(y, all, alpha, 0.05));
}
BENCHMARK(bm_prox_discrete)->Unit(benchmark::kMillisecond);

void bm_solver_iteration(benchmark::State& state) {
  SyntheticSpec spec;
  spec.m = 400;
  spec.n = 300;
  spec.rank = 5;
  spec.seed = 4;
  const auto [truth, ds] = synth_discrete_lowrank(spec);
  const auto [train, test] = split(ds, SplitSpec{0.3, 0});
  RegularizerSpec reg;
  reg.kind = RegKind::discrete;
  reg.lambda = 0.5;
  reg.xi = 0.05;
  reg.alphabet = Alphabet({1, 2, 3, 4, 5});
  const IndexSet unobs = train.index_set().complement();
  for (auto _ : state) {
    IterateState s = IterateState::zero(spec.m, spec.n);
    s = discrete_apg_step(std::move(s), train, reg, unobs);
    benchmark::DoNotOptimize(s.x_curr);
  }
}
BENCHMARK(bm_solver_iteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
