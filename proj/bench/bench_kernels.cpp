#include <benchmark/benchmark.h>

#include <random>

#include "spinchain/kernels.hpp"
#include "spinchain/operators.hpp"

using namespace spinchain;

namespace {

Operator random_operator(Eigen::Index d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Operator a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

std::vector<kernels::WeightBlock> random_blocks(int count, Eigen::Index size, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<kernels::WeightBlock> blocks;
  for (int b = 0; b < count; ++b) {
    kernels::WeightBlock w;
    w.w = Eigen::MatrixXcd::Zero(size, size);
    w.ea.resize(size);
    w.eb.resize(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      w.ea(i) = 1e4 * g(rng);
      w.eb(i) = 1e4 * g(rng);
      for (Eigen::Index j = 0; j < size; ++j) w.w(i, j) = cplx(g(rng), g(rng));
    }
    blocks.push_back(std::move(w));
  }
  return blocks;
}

std::vector<double> sweep_times() {
  std::vector<double> t;
  for (int i = 0; i < 100; ++i) t.push_back(i * 2.5e-6);
  return t;
}

void BM_rotate_collective(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Operator rho = random_operator(Eigen::Index(1) << n, 1);
  const auto u = rotation_matrix_2x2(RotationAxis::y(), 0.5 * 3.141592653589793);
  for (auto _ : state) {
    Operator a = rho;
    kernels::rotate_collective(a, n, u);
    benchmark::DoNotOptimize(a.data());
  }
}

void BM_rotate_collective_reference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Operator rho = random_operator(Eigen::Index(1) << n, 1);
  const auto u = rotation_matrix_2x2(RotationAxis::y(), 0.5 * 3.141592653589793);
  for (auto _ : state) {
    Operator a = rho;
    kernels::rotate_collective_reference(a, n, u);
    benchmark::DoNotOptimize(a.data());
  }
}

void BM_phase_sweep(benchmark::State& state) {
  const auto blocks = random_blocks(8, state.range(0), 2);
  const auto times = sweep_times();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::phase_sweep(blocks, times));
}

void BM_phase_sweep_reference(benchmark::State& state) {
  const auto blocks = random_blocks(8, state.range(0), 2);
  const auto times = sweep_times();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::phase_sweep_reference(blocks, times));
}

}  // namespace

BENCHMARK(BM_rotate_collective)->DenseRange(6, 9, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rotate_collective_reference)->DenseRange(6, 9, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phase_sweep)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_phase_sweep_reference)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
