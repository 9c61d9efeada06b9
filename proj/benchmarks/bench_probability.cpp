#include "noclick/detection.hpp"
#include "noclick/states.hpp"

#include <benchmark/benchmark.h>

namespace {

noclick::GaussianState product_state(int modes) {
  noclick::GaussianState state = noclick::squeezed_vacuum(0.4);
  for (int m = 1; m < modes; m++) {
    state = noclick::tensor_product(state, noclick::thermal(0.3 * m));
  }
  return state;
}

void BM_SingleModeNoClick(benchmark::State& state) {
  noclick::GaussianState probe = noclick::squeezed_vacuum(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::no_click_probability(probe, 0.7, 0.9));
  }
}
BENCHMARK(BM_SingleModeNoClick);

void BM_SingleModeNoClickDisplaced(benchmark::State& state) {
  noclick::GaussianState probe = noclick::coherent({1.2, -0.4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::no_click_probability(probe, 0.7, 0.9));
  }
}
BENCHMARK(BM_SingleModeNoClickDisplaced);

void BM_MultimodeNoClick(benchmark::State& state) {
  noclick::GaussianState probe = product_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(noclick::multimode_no_click_probability(probe, 0.7, 0.9));
  }
}
BENCHMARK(BM_MultimodeNoClick)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
