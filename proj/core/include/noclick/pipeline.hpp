#pragma once

#include "noclick/detection.hpp"
#include "noclick/entanglement.hpp"
#include "noclick/estimator.hpp"
#include "noclick/state.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace noclick {

// Knobs for the negativity measurement pipeline. Every setting receives
// shots_per_setting shots by default; shot_weights scales the budget of
// individual sub-experiments by label.
struct PipelineOptions {
  bool exact = false;
  std::int64_t shots_per_setting = 200000;
  double eta = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> single_mode_ts{0.5, 1.0};
  std::vector<double> two_mode_ts{0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0};
  double band_sigmas = 3.0;
  double extra_band = 0.0;
  std::map<std::string, double> shot_weights;
};

// One sub-experiment: a derived displacement-free state measured under a
// fixed schedule. The schedule seed is derived from (pipeline seed, label),
// so sub-experiments are statistically independent and order-insensitive.
struct SubExperimentPlan {
  std::string label;
  double phi = 0.0;
  GaussianState state;
  SettingSchedule schedule;
};

// Audit record kept in the report: the determinant recovered from one
// sub-experiment and, in sampling mode, the raw tallies behind it.
struct SubExperimentResult {
  std::string label;
  double phi = 0.0;
  double det = 0.0;
  double se_det = 0.0;
  TallyTable tallies;
};

struct NegativityReport {
  TwoModeDeterminants determinants;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double se_zeta2 = 0.0;
  double log_negativity = 0.0;
  double se_log_negativity = 0.0;
  double phi_star = 0.0;
  CriterionResult nec_suf;
  CriterionResult local_sufficient;
  bool entangled_nec_suf = false;
  bool entangled_sufficient_local = false;
  bool inconclusive = false;
  bool zeta2_snapped = false;
  std::array<double, 3> y_phase{};
  std::array<double, 3> se_y_phase{};
  double condition_number_ab = 0.0;
  bool wilson_fallback = false;
  std::vector<std::string> dropped_rows;
  std::vector<SubExperimentResult> sub_experiments;
};

// Expands a two-mode state into the twelve sub-experiments of the
// measurement scheme: local blocks gamma_A and gamma_B, the two-mode
// gamma_AB scan, and the plus/minus/two-copy-sum circuits at phases
// 0, pi/4, pi/2. The input passes through the two-copy displacement-free
// preparation first.
std::vector<SubExperimentPlan> plan_negativity_measurements(const GaussianState& state,
                                                            const PipelineOptions& options);

// Runs the plan and assembles the report: block determinants with errors,
// det(sigma) from the phase protocol, PT spectrum, log-negativity, and both
// criterion verdicts. Exact mode feeds analytic probabilities through the
// same estimators with zero variance.
NegativityReport measure_negativity_pipeline(const GaussianState& state,
                                             const PipelineOptions& options);

// Rebuilds the report from an existing tally table whose rows came from
// plan_negativity_measurements with the same options (label, setting and
// shot count must match the plan row for row).
NegativityReport estimate_negativity_from_tallies(const GaussianState& state,
                                                  const PipelineOptions& options,
                                                  const TallyTable& tallies);

// Uniform schedule over a transmittance list, with labels "<prefix>:T<k>".
SettingSchedule make_schedule(const std::vector<double>& ts, double eta, std::int64_t shots,
                              std::uint64_t seed, const std::string& label_prefix);

// Analytic no-click probability for every setting of a schedule.
std::vector<double> exact_probabilities(const GaussianState& state,
                                        const std::vector<DetectorSetting>& settings);

}  // namespace noclick
