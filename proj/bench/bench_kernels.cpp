#include <benchmark/benchmark.h>

#include "parshin/fq.hpp"
#include "parshin/kernels.hpp"
#include "parshin/milnor.hpp"
#include "parshin/rng.hpp"

using namespace parshin;

namespace {

// Sparse random relation matrix over Z/n, roughly what the class-group and
// closure presentations look like.
kernels::ModMatrix random_relations(std::size_t rows, std::size_t cols, std::uint32_t n, std::uint64_t seed) {
  Rng rng(seed);
  kernels::ModMatrix m(n, rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (int k = 0; k < 4; ++k) m.at(rng.below(rows), j) = static_cast<std::uint32_t>(rng.below(n));
  }
  return m;
}

void BM_TietzeSerial(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  auto m = random_relations(size, size + size / 2, 12, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::tietze_reduce_serial(m));
}

void BM_TietzeParallel(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  auto m = random_relations(size, size + size / 2, 12, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::tietze_reduce_parallel(m));
}

void BM_ClosureSerial(benchmark::State& state) {
  auto F = finite_field(static_cast<std::uint32_t>(state.range(0)));
  auto spec = milnor::closure_spec(*F, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assemble_closure_serial(spec));
}

void BM_ClosureParallel(benchmark::State& state) {
  auto F = finite_field(static_cast<std::uint32_t>(state.range(0)));
  auto spec = milnor::closure_spec(*F, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::assemble_closure_parallel(spec));
}

}  // namespace

BENCHMARK(BM_TietzeSerial)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TietzeParallel)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosureSerial)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosureParallel)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
