#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noclick/state.hpp"

namespace noclick {

// One detector configuration: light passes a beam splitter of
// transmittance T and a detector of efficiency eta, which folds into an
// effective transmittance eta*T. The phase is consumed only by the
// intermodal-correlation protocols.
struct DetectorSetting {
  double transmittance = 1.0;
  double efficiency = 1.0;
  double phase = 0.0;
  std::int64_t shots = 0;
  std::string label;

  double effective_transmittance() const { return transmittance * efficiency; }
};

struct SettingSchedule {
  std::vector<DetectorSetting> settings;
  std::uint64_t rng_seed = 0;
};

struct TallyRow {
  DetectorSetting setting;
  std::int64_t no_click_count = 0;

  double phat() const { return static_cast<double>(no_click_count) / setting.shots; }
};

struct TallyTable {
  std::vector<TallyRow> rows;
  std::uint64_t rng_seed = 0;
};

// Probability that a single-photon-sensitive detector behind a beam
// splitter of transmittance T with efficiency eta registers nothing, for a
// single-mode state. Supports nonzero displacement.
double no_click_probability(const GaussianState& state, double t, double eta);

// Probability that none of N detectors click when every mode passes a beam
// splitter of the same transmittance T. Requires zero displacement.
double multimode_no_click_probability(const GaussianState& state, double t, double eta);

// Dispatches to the single-mode or multimode probability by mode count.
double setting_probability(const GaussianState& state, const DetectorSetting& setting);

// Per-shot no-click outcomes for one setting, from the stream keyed by
// (seed, stream_index). Intended for event-level inspection at small M.
std::vector<std::uint8_t> simulate_shot_trace(const GaussianState& state,
                                              const DetectorSetting& setting, std::uint64_t seed,
                                              std::uint64_t stream_index);

// Draws no_click_count ~ Binomial(shots, P) per setting. Settings use
// independent streams keyed by (rng_seed, setting index), so tallies are
// reproducible bit-for-bit and independent of evaluation order. Settings
// with shots <= 10000 loop over individual shots (matching
// simulate_shot_trace); larger settings draw the binomial directly.
TallyTable simulate_tallies(const GaussianState& state, const SettingSchedule& schedule);

// Two-copy zero-displacement preparation: interferes the state with an
// identical copy on balanced beam splitters, one per mode pair, and keeps
// the difference modes. Output has the same covariance matrix and zero
// displacement.
GaussianState prepare_minus_mode(const GaussianState& state);

inline constexpr std::int64_t kShotTraceThreshold = 10000;

}  // namespace noclick
