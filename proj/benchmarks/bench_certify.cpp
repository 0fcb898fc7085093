#include <benchmark/benchmark.h>

#include <kcontract/certify.hpp>

namespace {

using kcontract::Matrix;

kcontract::NetworkSystem hopfield(int n) {
  return {0.5, Matrix::Ones(n, n), kcontract::Nonlinearity::scaled_tanh(0.07, n)};
}

void BM_NetworkCertificate(benchmark::State& state) {
  const auto net = hopfield(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::check_network_k_contraction(net, 2));
}
BENCHMARK(BM_NetworkCertificate)->Arg(10)->Arg(20);

void BM_ScalarSearch(benchmark::State& state) {
  const auto net = hopfield(static_cast<int>(state.range(0)));
  const auto sys = kcontract::network_to_lurie(net, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::search_scalar_p(sys, 2));
}
BENCHMARK(BM_ScalarSearch)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CertifyWithP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sys = kcontract::network_to_lurie(hopfield(n), 1.0);
  const Matrix p = Matrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::certify_with_p(sys, 2, p));
}
BENCHMARK(BM_CertifyWithP)->Arg(5)->Arg(10);

}  // namespace
