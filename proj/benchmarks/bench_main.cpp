#include <cmath>

#include <benchmark/benchmark.h>

#include "gbm_cutoff/cubic.hpp"
#include "gbm_cutoff/linalg.hpp"
#include "gbm_cutoff/simulate.hpp"

using namespace gbm;

static void BM_MatrixExp(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd u = Eigen::MatrixXd::Random(d, d) * 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(expm(u));
}
BENCHMARK(BM_MatrixExp)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_Cardano(benchmark::State& state) {
  const CubicCoefficients c = cutoff_cubic(0.3, 0.15, 0.9, std::exp(-20.0));
  for (auto _ : state) benchmark::DoNotOptimize(cardano_unique_real(c));
}
BENCHMARK(BM_Cardano);

static void BM_EulerMaruyamaPath(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const GBMSystem sys(MatrixD(-Eigen::MatrixXd::Identity(d, d)),
                      MatrixD(0.3 * Eigen::MatrixXd::Ones(d, d)), Vec::Ones(d));
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(euler_maruyama(sys, 1.0, 1e-3, 0, index++));
}
BENCHMARK(BM_EulerMaruyamaPath)->Arg(1)->Arg(3)->Arg(8);

BENCHMARK_MAIN();
