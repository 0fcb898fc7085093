#include <random>

#include <benchmark/benchmark.h>

#include <kcontract/compound.hpp>
#include <kcontract/measures.hpp>

namespace {

kcontract::Matrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  kcontract::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = dist(gen);
  return m;
}

void BM_MultiplicativeCompound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto a = random_matrix(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::multiplicative_compound(a, k));
}
BENCHMARK(BM_MultiplicativeCompound)->Args({6, 2})->Args({6, 3})->Args({10, 2})->Args({10, 4})->Args({12, 6});

void BM_AdditiveCompound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto a = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::additive_compound(a, k));
}
BENCHMARK(BM_AdditiveCompound)->Args({6, 2})->Args({10, 2})->Args({10, 4})->Args({16, 3})->Args({20, 2});

void BM_Mu2OfAdditiveCompound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::mu2(kcontract::additive_compound(a, 2).body));
}
BENCHMARK(BM_Mu2OfAdditiveCompound)->Arg(5)->Arg(10)->Arg(20);

void BM_TopKSingularSq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_matrix(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::top_k_singular_sq_sum(a, 2));
}
BENCHMARK(BM_TopKSingularSq)->Arg(10)->Arg(50)->Arg(100);

}  // namespace
