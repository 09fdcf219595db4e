#include <benchmark/benchmark.h>

#include "odmr/analysis.hpp"
#include "odmr/disorder.hpp"
#include "odmr/spectrum.hpp"

namespace {

using namespace odmr;

void BM_ExcitationProbability(benchmark::State& state) {
  const CenterParams c{2870, 0.4, -0.3, 1.2, 0.3, 0.3, 2.0};
  double w = 2860.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(excitation_probability(c, w));
    w += 1e-6;
  }
}
BENCHMARK(BM_ExcitationProbability);

void BM_DrawEnsemble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto geo = AxisPopulation::along_111(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(draw_ensemble(DisorderSpec{}, geo, n, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawEnsemble)->Arg(10000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_EnsembleExcitation(benchmark::State& state) {
  const auto e = draw_ensemble(DisorderSpec{}, AxisPopulation::along_111(0.0),
                               static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ensemble_excitation(e, 2870.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnsembleExcitation)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_ComputeSpectrum(benchmark::State& state) {
  const auto e = draw_ensemble(DisorderSpec{}, AxisPopulation::along_111(0.0), 20000, 1);
  const FrequencyGrid grid{2850, 2890, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(e, grid));
}
BENCHMARK(BM_ComputeSpectrum)->Arg(81)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_OdeOracle(benchmark::State& state) {
  const CenterParams c{2870, 0.4, -0.3, 1.2, 0.3, 0.3, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(ode_steady_state_oracle(c, 2869.0));
}
BENCHMARK(BM_OdeOracle)->Unit(benchmark::kMicrosecond);

void BM_DegeneracyStreaming(benchmark::State& state) {
  const std::vector<double> eps{0.05, 0.1, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(degeneracy_fraction(DisorderSpec{}, 1'000'000, 3, eps));
  }
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_DegeneracyStreaming)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
