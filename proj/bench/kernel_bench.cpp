#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cgaedit/kernels.hpp"

using namespace cgaedit;

namespace {

std::vector<Vec3> points(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vec3> out(n);
  for (auto &p : out) p = {u(rng), u(rng), u(rng)};
  return out;
}

const Motor kMotor = translator(1, 2, 3) * rotor(0.7, Multivector::basis(1), Multivector::basis(2));

void BM_BatchSerial(benchmark::State &state) {
  const auto in = points(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec3> out(in.size());
  for (auto _ : state) {
    apply_motor_batch_serial(kMotor, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchOpenMP(benchmark::State &state) {
  const auto in = points(static_cast<std::size_t>(state.range(0)));
  std::vector<Vec3> out(in.size());
  for (auto _ : state) {
    apply_motor_batch(kMotor, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(differential_sweep_serial(static_cast<std::size_t>(state.range(0)), 11));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepOpenMP(benchmark::State &state) {
  for (auto _ : state) benchmark::DoNotOptimize(differential_sweep(static_cast<std::size_t>(state.range(0)), 11));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BatchOpenMP)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_SweepSerial)->Arg(1000);
BENCHMARK(BM_SweepOpenMP)->Arg(1000);

BENCHMARK_MAIN();
