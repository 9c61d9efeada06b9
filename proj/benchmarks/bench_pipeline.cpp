#include "noclick/pipeline.hpp"
#include "noclick/states.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_NegativityPipelineExact(benchmark::State& state) {
  noclick::GaussianState probe = noclick::two_mode_squeezed_vacuum(0.3);
  noclick::PipelineOptions options;
  options.exact = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::measure_negativity_pipeline(probe, options));
  }
}
BENCHMARK(BM_NegativityPipelineExact);

void BM_NegativityPipelineSampled(benchmark::State& state) {
  noclick::GaussianState probe = noclick::two_mode_squeezed_vacuum(0.3);
  noclick::PipelineOptions options;
  options.shots_per_setting = state.range(0);
  options.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::measure_negativity_pipeline(probe, options));
  }
}
BENCHMARK(BM_NegativityPipelineSampled)->Arg(20000)->Arg(200000);

void BM_PlanNegativityMeasurements(benchmark::State& state) {
  noclick::GaussianState probe = noclick::two_mode_squeezed_vacuum(0.3);
  noclick::PipelineOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::plan_negativity_measurements(probe, options));
  }
}
BENCHMARK(BM_PlanNegativityMeasurements);

}  // namespace

BENCHMARK_MAIN();
