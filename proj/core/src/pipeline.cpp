#include "noclick/pipeline.hpp"

#include "noclick/errors.hpp"
#include "noclick/rng.hpp"
#include "noclick/states.hpp"
#include "noclick/transforms.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

namespace noclick {

namespace {

constexpr std::array<double, 3> kProtocolPhases = {0.0, std::numbers::pi / 4.0,
                                                   std::numbers::pi / 2.0};

void validate_options(const PipelineOptions& options) {
  if (options.shots_per_setting <= 0) {
    throw InvalidParameter("shots_per_setting must be positive");
  }
  if (!(options.eta > 0.0 && options.eta <= 1.0)) {
    throw InvalidParameter("eta must lie in (0, 1]");
  }
  if (options.single_mode_ts.size() < 2) {
    throw InsufficientSettings("single-mode scans need at least 2 transmittances");
  }
  if (options.two_mode_ts.size() < 4) {
    throw InsufficientSettings("the two-mode scan needs at least 4 transmittances");
  }
  if (!(options.band_sigmas >= 0.0) || !(options.extra_band >= 0.0)) {
    throw InvalidParameter("band_sigmas and extra_band must be nonnegative");
  }
}

std::int64_t weighted_shots(const PipelineOptions& options, const std::string& label) {
  auto it = options.shot_weights.find(label);
  if (it == options.shot_weights.end()) {
    return options.shots_per_setting;
  }
  if (!(it->second > 0.0) || !std::isfinite(it->second)) {
    throw InvalidParameter("shot weight for '" + label + "' must be positive");
  }
  double scaled = std::round(static_cast<double>(options.shots_per_setting) * it->second);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(scaled));
}

// Everything extracted from one sub-experiment before report assembly.
struct SubOutcome {
  double det = 0.0;
  double se_det = 0.0;
  double condition_number = 0.0;
  bool wilson = false;
  std::vector<std::string> dropped;
  TallyTable tallies;
};

SubOutcome exact_outcome(const SubExperimentPlan& sub) {
  SubOutcome out;
  std::vector<double> p = exact_probabilities(sub.state, sub.schedule.settings);
  std::vector<double> t_eff;
  t_eff.reserve(sub.schedule.settings.size());
  for (const DetectorSetting& setting : sub.schedule.settings) {
    t_eff.push_back(setting.effective_transmittance());
  }
  if (sub.state.mode_count() == 2) {
    MultimodeEstimate est = estimate_multimode_exact(p, t_eff, 2);
    out.det = est.f.f.back();
    out.se_det = est.se_f.back();
    out.condition_number = est.condition_number;
  } else {
    SingleModeEstimate est = estimate_single_mode_exact(p, t_eff);
    out.det = est.det_gamma;
    out.se_det = est.se_det_gamma;
  }
  return out;
}

SubOutcome tally_outcome(const SubExperimentPlan& sub, TallyTable table) {
  SubOutcome out;
  if (sub.state.mode_count() == 2) {
    MultimodeEstimate est = estimate_multimode(table, 2);
    out.det = est.f.f.back();
    out.se_det = est.se_f.back();
    out.condition_number = est.condition_number;
    out.wilson = est.wilson_fallback;
    out.dropped = est.dropped_rows;
  } else {
    SingleModeEstimate est = estimate_single_mode(table);
    out.det = est.det_gamma;
    out.se_det = est.se_det_gamma;
    out.wilson = est.wilson_fallback;
    out.dropped = est.dropped_rows;
  }
  out.tallies = std::move(table);
  return out;
}

NegativityReport assemble_report(const std::vector<SubExperimentPlan>& plan,
                                 std::vector<SubOutcome> outcomes,
                                 const PipelineOptions& options) {
  NegativityReport report;
  std::array<SubOutcome*, 3> plus{}, minus{}, sum{};
  SubOutcome* det_a = nullptr;
  SubOutcome* det_b = nullptr;
  SubOutcome* det_ab = nullptr;

  for (std::size_t i = 0; i < plan.size(); i++) {
    const SubExperimentPlan& sub = plan[i];
    SubOutcome& outcome = outcomes[i];
    report.wilson_fallback = report.wilson_fallback || outcome.wilson;
    report.dropped_rows.insert(report.dropped_rows.end(), outcome.dropped.begin(),
                               outcome.dropped.end());
    report.sub_experiments.push_back(
        {sub.label, sub.phi, outcome.det, outcome.se_det, outcome.tallies});
    if (sub.label == "gamma_a") {
      det_a = &outcome;
    } else if (sub.label == "gamma_b") {
      det_b = &outcome;
    } else if (sub.label == "gamma_ab") {
      det_ab = &outcome;
    } else {
      std::size_t k = static_cast<std::size_t>(sub.label.back() - '0');
      if (sub.label.starts_with("gamma_plus")) {
        plus[k] = &outcome;
      } else if (sub.label.starts_with("gamma_minus")) {
        minus[k] = &outcome;
      } else {
        sum[k] = &outcome;
      }
    }
  }

  for (std::size_t k = 0; k < 3; k++) {
    report.y_phase[k] = sigma_from_sums(plus[k]->det, minus[k]->det, sum[k]->det);
    report.se_y_phase[k] = std::sqrt(4.0 * plus[k]->se_det * plus[k]->se_det +
                                     4.0 * minus[k]->se_det * minus[k]->se_det +
                                     16.0 * sum[k]->se_det * sum[k]->se_det);
  }
  auto [det_sigma, phi_star] =
      sigma_det_from_phases(report.y_phase[0], report.y_phase[1], report.y_phase[2]);
  report.phi_star = phi_star;

  report.determinants.det_a = det_a->det;
  report.determinants.det_b = det_b->det;
  report.determinants.det_ab = det_ab->det;
  report.determinants.det_sigma = det_sigma;
  report.determinants.se_det_a = det_a->se_det;
  report.determinants.se_det_b = det_b->se_det;
  report.determinants.se_det_ab = det_ab->se_det;
  report.determinants.se_det_sigma =
      sigma_det_standard_error(report.y_phase[0], report.y_phase[1], report.y_phase[2],
                               report.se_y_phase[0], report.se_y_phase[1], report.se_y_phase[2]);
  report.condition_number_ab = det_ab->condition_number;

  // Numerical guard band for the criterion margins: the two-mode solve works
  // at condition number kappa, so margins closer to zero than about
  // kappa * epsilon * scale are indistinguishable from the boundary.
  double seralian = report.determinants.det_a + report.determinants.det_b - 2.0 * det_sigma;
  double scale = std::max({1.0, std::fabs(report.determinants.det_ab), std::fabs(seralian)});
  double guard = 1000.0 * std::max(report.condition_number_ab, 1.0) *
                 std::numeric_limits<double>::epsilon() * scale;
  double extra_band = std::max(options.extra_band, guard);
  report.nec_suf = criterion_nec_suf(report.determinants, options.band_sigmas, extra_band);
  report.local_sufficient =
      criterion_local_sufficient(report.determinants, options.band_sigmas, extra_band);
  report.entangled_nec_suf = report.nec_suf.detected();
  report.entangled_sufficient_local = report.local_sufficient.detected();

  // Shot noise on det(gamma_AB) can push the PT discriminant below zero even
  // for a healthy state; only a deficit beyond six standard errors is treated
  // as inconsistent data.
  auto [zeta1, zeta2] = symplectic_pt_spectrum_banded(report.determinants, 6.0);
  report.zeta1 = zeta1;
  report.zeta2 = zeta2;
  report.se_zeta2 = zeta2_standard_error(report.determinants);
  // A separability verdict with zeta2 a numerical hair below 1 is the
  // boundary itself; pull it back so log-negativity reads exactly zero.
  if (!report.nec_suf.detected() && report.zeta2 < 1.0 &&
      (1.0 - report.zeta2) <= std::sqrt(guard)) {
    report.zeta2 = 1.0;
    report.zeta2_snapped = true;
  }
  report.log_negativity = log_negativity(report.zeta2);
  report.se_log_negativity =
      report.zeta2 < 1.0 ? report.se_zeta2 / (report.zeta2 * std::numbers::ln2) : 0.0;
  // A clipped discriminant collapses the spectrum and hides det(gamma_AB)
  // from the finite-difference error, so the run cannot resolve zeta2 at all.
  double pt_disc = seralian * seralian - 4.0 * report.determinants.det_ab;
  report.inconclusive = pt_disc < 0.0 || std::fabs(report.zeta2 - 1.0) <= options.band_sigmas * report.se_zeta2;
  return report;
}

}  // namespace

SettingSchedule make_schedule(const std::vector<double>& ts, double eta, std::int64_t shots,
                              std::uint64_t seed, const std::string& label_prefix) {
  SettingSchedule schedule;
  schedule.rng_seed = seed;
  schedule.settings.reserve(ts.size());
  for (std::size_t k = 0; k < ts.size(); k++) {
    DetectorSetting setting;
    setting.transmittance = ts[k];
    setting.efficiency = eta;
    setting.shots = shots;
    setting.label = label_prefix + ":T" + std::to_string(k);
    schedule.settings.push_back(std::move(setting));
  }
  return schedule;
}

std::vector<double> exact_probabilities(const GaussianState& state,
                                        const std::vector<DetectorSetting>& settings) {
  std::vector<double> p;
  p.reserve(settings.size());
  for (const DetectorSetting& setting : settings) {
    p.push_back(setting_probability(state, setting));
  }
  return p;
}

std::vector<SubExperimentPlan> plan_negativity_measurements(const GaussianState& state,
                                                            const PipelineOptions& options) {
  if (state.mode_count() != 2) {
    throw DimensionMismatch("the negativity pipeline takes a two-mode state");
  }
  validate_options(options);

  GaussianState prepared = prepare_minus_mode(state);
  std::vector<SubExperimentPlan> plan;
  plan.reserve(12);

  auto add = [&](const std::string& label, double phi, GaussianState measured,
                 const std::vector<double>& ts) {
    SettingSchedule schedule = make_schedule(ts, options.eta, weighted_shots(options, label),
                                             derive_seed(options.seed, label), label);
    for (DetectorSetting& setting : schedule.settings) {
      setting.phase = phi;
    }
    plan.push_back({label, phi, std::move(measured), std::move(schedule)});
  };

  add("gamma_a", 0.0, reduce(prepared, {0}), options.single_mode_ts);
  add("gamma_b", 0.0, reduce(prepared, {1}), options.single_mode_ts);
  add("gamma_ab", 0.0, prepared, options.two_mode_ts);

  for (int k = 0; k < 3; k++) {
    double phi = kProtocolPhases[static_cast<std::size_t>(k)];
    std::string suffix = ":phi" + std::to_string(k);
    GaussianState mixed = apply_beam_splitter(apply_phase_shift(prepared, 1, phi), 0, 1, 0.5);
    add("gamma_plus" + suffix, phi, reduce(mixed, {0}), options.single_mode_ts);
    add("gamma_minus" + suffix, phi, reduce(mixed, {1}), options.single_mode_ts);
    // Two independent copies; mode A of the first meets mode B of the second.
    GaussianState copies = tensor_product(prepared, prepared);
    GaussianState cross = apply_beam_splitter(apply_phase_shift(copies, 3, phi), 0, 3, 0.5);
    add("gamma_sum" + suffix, phi, reduce(cross, {0}), options.single_mode_ts);
  }
  return plan;
}

NegativityReport measure_negativity_pipeline(const GaussianState& state,
                                             const PipelineOptions& options) {
  std::vector<SubExperimentPlan> plan = plan_negativity_measurements(state, options);
  std::vector<SubOutcome> outcomes;
  outcomes.reserve(plan.size());
  for (const SubExperimentPlan& sub : plan) {
    if (options.exact) {
      outcomes.push_back(exact_outcome(sub));
    } else {
      outcomes.push_back(tally_outcome(sub, simulate_tallies(sub.state, sub.schedule)));
    }
  }
  return assemble_report(plan, std::move(outcomes), options);
}

NegativityReport estimate_negativity_from_tallies(const GaussianState& state,
                                                  const PipelineOptions& options,
                                                  const TallyTable& tallies) {
  std::vector<SubExperimentPlan> plan = plan_negativity_measurements(state, options);

  std::map<std::string, const TallyRow*> by_label;
  for (const TallyRow& row : tallies.rows) {
    if (!by_label.emplace(row.setting.label, &row).second) {
      throw ConfigError("tally contains duplicate label '" + row.setting.label + "'");
    }
  }

  std::vector<SubOutcome> outcomes;
  outcomes.reserve(plan.size());
  for (const SubExperimentPlan& sub : plan) {
    TallyTable table;
    table.rng_seed = sub.schedule.rng_seed;
    for (const DetectorSetting& setting : sub.schedule.settings) {
      auto it = by_label.find(setting.label);
      if (it == by_label.end()) {
        throw ConfigError("tally is missing the planned row '" + setting.label + "'");
      }
      const TallyRow& row = *it->second;
      if (row.setting.transmittance != setting.transmittance ||
          row.setting.efficiency != setting.efficiency || row.setting.phase != setting.phase ||
          row.setting.shots != setting.shots) {
        throw ConfigError("tally row '" + setting.label +
                          "' does not match the planned setting; "
                          "re-run simulate with this config");
      }
      table.rows.push_back({setting, row.no_click_count});
    }
    outcomes.push_back(tally_outcome(sub, std::move(table)));
  }
  return assemble_report(plan, std::move(outcomes), options);
}

}  // namespace noclick
