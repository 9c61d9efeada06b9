#include "noclick/detection.hpp"
#include "noclick/estimator.hpp"
#include "noclick/pipeline.hpp"
#include "noclick/states.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

void BM_SingleModeEstimate(benchmark::State& state) {
  noclick::GaussianState probe = noclick::squeezed_vacuum(0.5);
  noclick::SettingSchedule schedule =
      noclick::make_schedule({0.5, 1.0}, 1.0, 200000, 3, "b");
  noclick::TallyTable tally = noclick::simulate_tallies(probe, schedule);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::estimate_single_mode(tally));
  }
}
BENCHMARK(BM_SingleModeEstimate);

void BM_MultimodeEstimateExact(benchmark::State& state) {
  int modes = static_cast<int>(state.range(0));
  noclick::GaussianState probe = noclick::two_mode_squeezed_vacuum(0.4);
  if (modes == 3) {
    probe = noclick::tensor_product(probe, noclick::thermal(0.5));
  }
  std::vector<double> ts;
  for (int k = 0; k < 2 * modes; k++) {
    ts.push_back(0.4 + 0.6 * k / (2.0 * modes - 1.0));
  }
  std::vector<double> p;
  for (double t : ts) {
    p.push_back(noclick::multimode_no_click_probability(probe, t, 1.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::estimate_multimode_exact(p, ts, modes));
  }
}
BENCHMARK(BM_MultimodeEstimateExact)->Arg(2)->Arg(3);

void BM_LambdaMultimode(benchmark::State& state) {
  noclick::CharPolyCoefficients coefficients;
  coefficients.mode_count = 2;
  coefficients.f = {5.9, 12.3, 10.8, 3.4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::lambda_multimode(coefficients));
  }
}
BENCHMARK(BM_LambdaMultimode);

}  // namespace
