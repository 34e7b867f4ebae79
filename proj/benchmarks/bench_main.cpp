#include <benchmark/benchmark.h>

#include "rotcb/rotcb.hpp"

using namespace rotcb;

namespace {

ComplexMatrix user_correlation(const ArrayGeometry& geom) {
  RandomSource rng(3);
  return correlation_expected(geom, ChannelProfile{}, draw_user(rng, ChannelProfile{})).r;
}

void BM_Quantize(benchmark::State& state) {
  const auto bits = static_cast<int>(state.range(0));
  const Codebook cb = rvq_codebook(1, 64, bits);
  RandomSource rng(2);
  ComplexVector h(64);
  for (Index i = 0; i < 64; ++i) h(i) = rng.complex_normal();
  h.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(quantize(h, cb).index);
}
BENCHMARK(BM_Quantize)->Arg(8)->Arg(12)->Arg(16);

void BM_IqcQuantize(benchmark::State& state) {
  const Codebook h_book = rvq_codebook(1, 8, 8);
  const Codebook v_book = rvq_codebook(2, 8, 8);
  RandomSource rng(2);
  ComplexVector h(64);
  for (Index i = 0; i < 64; ++i) h(i) = rng.complex_normal();
  h.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(iqc_quantize(h, h_book, v_book).index);
}
BENCHMARK(BM_IqcQuantize);

void BM_TuckerPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix r = user_correlation(ArrayGeometry::ura(n, n));
  for (auto _ : state) benchmark::DoNotOptimize(tucker_pipeline(r, n, n).lambda.data());
}
BENCHMARK(BM_TuckerPipeline)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_PsdSqrt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix r = user_correlation(ArrayGeometry::ura(n, n));
  for (auto _ : state) benchmark::DoNotOptimize(psd_sqrt(r).data());
}
BENCHMARK(BM_PsdSqrt)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CorrelationMonteCarlo(benchmark::State& state) {
  const ArrayGeometry geom = ArrayGeometry::ura(4, 4);
  const ChannelProfile profile;
  RandomSource rng(4);
  const UserGeometry user = draw_user(rng, profile);
  const auto draws = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(correlation_analytic(rng, geom, profile, user, draws).r.data());
}
BENCHMARK(BM_CorrelationMonteCarlo)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CorrelationQuadrature(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(1));
  const ArrayGeometry geom = state.range(0) == 0 ? ArrayGeometry::ura(n, n) : ArrayGeometry::ucca(n, n);
  const ChannelProfile profile;
  RandomSource rng(5);
  const UserGeometry user = draw_user(rng, profile);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_expected(geom, profile, user).r.data());
}
BENCHMARK(BM_CorrelationQuadrature)
    ->ArgNames({"ucca", "n"})
    ->Args({0, 4})
    ->Args({0, 8})
    ->Args({1, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
