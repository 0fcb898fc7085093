#include <benchmark/benchmark.h>

#include <kcontract/measures.hpp>
#include <kcontract/simulate.hpp>

namespace {

using kcontract::Matrix;

const kcontract::NetworkSystem& hopfield() {
  static const kcontract::NetworkSystem net(0.5, Matrix::Ones(10, 10),
                                            kcontract::Nonlinearity::scaled_tanh(0.07, 10));
  return net;
}

void BM_IntegrateHopfield(benchmark::State& state) {
  const auto dyn = kcontract::make_dynamics(hopfield());
  const auto x0 = kcontract::random_initial_conditions(1, 10, -5.0, 5.0, 11).front();
  kcontract::IntegrationOptions opts;
  opts.t_end = 10.0;
  opts.dt = 1e-3;
  opts.record_every = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::integrate(dyn, x0, opts));
}
BENCHMARK(BM_IntegrateHopfield)->Unit(benchmark::kMillisecond);

void BM_VariationalHopfield(benchmark::State& state) {
  const auto dyn = kcontract::make_dynamics(hopfield());
  const auto x0 = kcontract::random_initial_conditions(1, 10, -5.0, 5.0, 12).front();
  const Matrix frame = Matrix::Identity(10, 2);
  const auto q = kcontract::ScalingQ::identity(10);
  kcontract::IntegrationOptions opts;
  opts.t_end = 10.0;
  opts.dt = 1e-3;
  opts.record_every = 100;
  for (auto _ : state) benchmark::DoNotOptimize(kcontract::integrate_with_variational(dyn, x0, frame, q, opts));
}
BENCHMARK(BM_VariationalHopfield)->Unit(benchmark::kMillisecond);

}  // namespace
