#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "lightray/reconstruction.hpp"
#include "lightray/sampling.hpp"
#include "lightray/tensor.hpp"

using namespace lightray;

namespace {

PhantomField field(int m, bool tracefree) {
  std::mt19937_64 rng(42);
  RandomPhantomOptions opts;
  opts.m = m;
  opts.tracefree = tracefree;
  return random_phantom(opts, rng);
}

std::vector<Ray> rays(int count) {
  std::mt19937_64 rng(7);
  std::vector<Ray> out;
  for (int i = 0; i < count; ++i) out.push_back(random_ray(3, 1.0, rng));
  return out;
}

}  // namespace

static void BM_Moments(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  QuadratureSpec q;
  q.nodes = static_cast<int>(state.range(1));
  const DataOracle oracle(field(m, false), q);
  const auto rs = rays(64);
  std::vector<double> out(static_cast<std::size_t>(m + 2));
  std::size_t i = 0;
  for (auto _ : state) {
    oracle.moments(rs[i++ % rs.size()], m + 1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Moments)->Args({1, 32})->Args({1, 64})->Args({2, 64})->Args({3, 64});

static void BM_Decompose(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  auto t = RealTensor::spacetime(3, m);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(t, 1.0));
}
BENCHMARK(BM_Decompose)->DenseRange(2, 6);

static void BM_SliceValues(benchmark::State& state) {
  const DataOracle oracle(field(1, false));
  const Vec omega = Vec::Unit(3, 0);
  Vec zeta = Vec::Zero(4);
  zeta(2) = 1.0;
  const SliceGrid grid{6.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(slice_values(oracle, omega, zeta, grid, true));
}
BENCHMARK(BM_SliceValues)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_ColumnBundle(benchmark::State& state) {
  QuadratureSpec q;
  q.nodes = 32;
  auto parent = std::make_shared<DataOracle>(field(2, true), q);
  auto bundle = reduce_rank(parent);
  const auto rs = rays(16);
  std::vector<double> out(static_cast<std::size_t>(bundle->channels() * 2));
  std::size_t i = 0;
  for (auto _ : state) {
    bundle->moments(rs[i++ % rs.size()], 1, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ColumnBundle)->Unit(benchmark::kMicrosecond);

static void BM_ReconstructVectorPoint(benchmark::State& state) {
  QuadratureSpec q;
  q.nodes = 32;
  const DataOracle oracle(field(1, false), q);
  const auto cfg = ReconConfig::defaults(3);
  const auto zetas = sample_zetas(cfg, 4, 3);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(recover_vectors(oracle, zetas[i++ % zetas.size()], cfg));
}
BENCHMARK(BM_ReconstructVectorPoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
