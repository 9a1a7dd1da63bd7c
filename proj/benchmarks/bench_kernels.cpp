#include <benchmark/benchmark.h>

#include <random>

#include "permsft/entropy.hpp"
#include "permsft/mahler.hpp"
#include "permsft/permanent.hpp"
#include "permsft/transfer.hpp"

using namespace permsft;

namespace {

GroupRingElement interval(std::int64_t n) {
  std::vector<std::pair<LatticePoint, double>> t;
  for (std::int64_t i = 0; i < n; ++i) t.emplace_back(LatticePoint{i}, 1.0);
  return GroupRingElement(1, t);
}

GroupRingElement nearest_neighbour() {
  return GroupRingElement(2, {{LatticePoint{-1, 0}, 1.0},
                              {LatticePoint{1, 0}, 1.0},
                              {LatticePoint{0, -1}, 1.0},
                              {LatticePoint{0, 1}, 1.0}});
}

void BM_RyserDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = w(rng);
  }
  PermanentOptions o;
  o.backend = Backend::kRyser;
  o.budget = 1e12;
  for (auto _ : state) benchmark::DoNotOptimize(dense_permanent(m, o).log());
}
BENCHMARK(BM_RyserDense)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond);

void BM_FrontierTorusLine(benchmark::State& state) {
  const auto f = interval(3);
  const TorusQuotient q({state.range(0)});
  PermanentOptions o;
  o.backend = Backend::kFrontier;
  o.integer_mode = true;
  for (auto _ : state) benchmark::DoNotOptimize(matrix_permanent(torus_matrix(f, q), o).count);
}
BENCHMARK(BM_FrontierTorusLine)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMicrosecond);

void BM_FrontierDimerTorus(benchmark::State& state) {
  const auto f = canonical_translate(nearest_neighbour());
  const TorusQuotient q({state.range(0), state.range(0)});
  PermanentOptions o;
  o.backend = Backend::kFrontier;
  o.integer_mode = true;
  o.budget = 1e12;
  for (auto _ : state) benchmark::DoNotOptimize(matrix_permanent(torus_matrix(f, q), o).count);
}
BENCHMARK(BM_FrontierDimerTorus)->DenseRange(3, 6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FrontierWindow(benchmark::State& state) {
  const auto f = nearest_neighbour();
  const Window F = Window::cube(2, state.range(0));
  PermanentOptions o;
  o.integer_mode = true;
  o.budget = 1e12;
  for (auto _ : state) benchmark::DoNotOptimize(per_AF(f, f.support(), F, o).log());
}
BENCHMARK(BM_FrontierWindow)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_TransferPressure(benchmark::State& state) {
  const auto f = interval(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transfer_pressure_Z(f));
}
BENCHMARK(BM_TransferPressure)->DenseRange(3, 11, 2)->Unit(benchmark::kMillisecond);

void BM_Mahler2D(benchmark::State& state) {
  const GroupRingElement f(2, {{LatticePoint{0, 0}, 1.0}, {LatticePoint{1, 0}, 1.0}, {LatticePoint{0, 1}, 1.0}});
  QuadratureConfig cfg;
  cfg.grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mahler_measure(f, cfg).value);
}
BENCHMARK(BM_Mahler2D)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
