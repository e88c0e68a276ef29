#include "sldp/log_mgf.hpp"
#include "sldp/mcverify.hpp"
#include "sldp/rates.hpp"
#include "sldp/samplers.hpp"

#include <benchmark/benchmark.h>

using namespace sldp;

static void BM_LambdaCone(benchmark::State& state) {
  const auto c = MeasureFamily::cone_lp(3.0);
  double s1 = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambda_full(c, s1, 0.1, Order::Hessian));
    s1 = s1 < 8.0 ? s1 * 1.1 : 0.5;
  }
}
BENCHMARK(BM_LambdaCone);

static void BM_HaarStiefel(benchmark::State& state) {
  RngStream rng(1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(haar_stiefel(n, 3, rng));
}
BENCHMARK(BM_HaarStiefel)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_QuenchedRateGaussian(benchmark::State& state) {
  const auto g = MeasureFamily::product_gaussian();
  const Vec x = Vec::Constant(2, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(j_quenched(g, NuSpec::standard(2), x));
}
BENCHMARK(BM_QuenchedRateGaussian)->Unit(benchmark::kMillisecond);

static void BM_QuenchedRateCone(benchmark::State& state) {
  const auto c = MeasureFamily::cone_lp(3.0);
  const Vec x = Vec::Constant(1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(j_quenched(c, NuSpec::standard(1), x));
}
BENCHMARK(BM_QuenchedRateCone)->Unit(benchmark::kMillisecond);

static void BM_TiltedTailBatch(benchmark::State& state) {
  const auto ev = TailEvent::halfspace(Vec::Ones(1), 1.0);
  TailOptions opts;
  opts.tilt = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_tail_rate(MeasureFamily::product_gaussian(), 1, ev, {400}, 4096,
                                                FrameMode::Quenched, RngStream(2), opts));
  }
}
BENCHMARK(BM_TiltedTailBatch)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
