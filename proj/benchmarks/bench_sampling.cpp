#include "noclick/detection.hpp"
#include "noclick/pipeline.hpp"
#include "noclick/rng.hpp"
#include "noclick/states.hpp"

#include <benchmark/benchmark.h>

namespace {

// Covers both sampling paths: per-shot traces below the threshold and direct
// binomial draws above it.
void BM_SimulateTallies(benchmark::State& state) {
  noclick::GaussianState probe = noclick::squeezed_vacuum(0.5);
  std::int64_t shots = state.range(0);
  noclick::SettingSchedule schedule = noclick::make_schedule({0.5, 1.0}, 1.0, shots, 42, "b");
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::simulate_tallies(probe, schedule));
  }
  state.SetItemsProcessed(state.iterations() * 2 * shots);
}
BENCHMARK(BM_SimulateTallies)->Arg(1000)->Arg(10000)->Arg(1000000);

void BM_ShotTrace(benchmark::State& state) {
  noclick::GaussianState probe = noclick::thermal(1.0);
  noclick::DetectorSetting setting;
  setting.transmittance = 0.7;
  setting.shots = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::simulate_shot_trace(probe, setting, 7, 0));
  }
  state.SetItemsProcessed(state.iterations() * setting.shots);
}
BENCHMARK(BM_ShotTrace)->Arg(1000)->Arg(10000);

void BM_PhiloxDoubles(benchmark::State& state) {
  noclick::PhiloxStream rng(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_double());
  }
}
BENCHMARK(BM_PhiloxDoubles);

}  // namespace
