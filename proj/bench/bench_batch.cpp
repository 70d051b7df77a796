// Serial reference vs OpenMP drivers on a random corpus.

#include <benchmark/benchmark.h>

#include "support.hpp"
#include "viscodual/batch.hpp"
#include "viscodual/duality.hpp"
#include "viscodual/verify.hpp"

using namespace viscodual;

namespace {

std::vector<AnyKernel> make_corpus(int scalar, int matrix) {
  support::Rng rng(99);
  std::vector<AnyKernel> out;
  for (int i = 0; i < scalar; ++i) out.push_back(support::random_scalar_relaxation(rng));
  for (int i = 0; i < matrix; ++i) out.push_back(support::random_matrix_relaxation(rng));
  return out;
}

const std::vector<AnyKernel>& corpus() {
  static const auto c = make_corpus(200, 10);
  return c;
}

void BM_DualizeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::dualize_all(corpus()));
}

void BM_DualizeParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parallel::dualize_all(corpus()));
}

void BM_ResidualsSerial(benchmark::State& state) {
  const auto duals = serial::dualize_all(corpus());
  for (auto _ : state) benchmark::DoNotOptimize(serial::pair_residuals(corpus(), duals));
}

void BM_ResidualsParallel(benchmark::State& state) {
  const auto duals = serial::dualize_all(corpus());
  for (auto _ : state) benchmark::DoNotOptimize(parallel::pair_residuals(corpus(), duals));
}

const ScalarRelaxation kRelax(0.1, 1.0, {{0.5, 1.0}, {2.0, 3.0}, {9.0, 0.5}});
const ScalarCreep kCreep = std::get<ScalarCreep>(dualize(AnyKernel(kRelax)));

void BM_ConvolutionGridSerial(benchmark::State& state) {
  const auto grid = geometric_grid(1e-3, 1e3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::convolution_grid(kRelax, kCreep, grid));
}

void BM_ConvolutionGridParallel(benchmark::State& state) {
  const auto grid = geometric_grid(1e-3, 1e3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parallel::convolution_grid(kRelax, kCreep, grid));
}

}  // namespace

BENCHMARK(BM_DualizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DualizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolutionGridSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_ConvolutionGridParallel)->Arg(1 << 12)->Arg(1 << 16);

BENCHMARK_MAIN();
