#include "noclick/detection.hpp"

#include <cmath>
#include <string>

#include "noclick/rng.hpp"
#include "noclick/transforms.hpp"
#include "noclick/states.hpp"

namespace noclick {

namespace {

double validate_effective_transmittance(double t, double eta) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidParameter("transmittance must lie in [0, 1]");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("efficiency must lie in [0, 1]");
  }
  double t_eff = t * eta;
  if (!(t_eff > 0.0)) {
    throw InvalidParameter("effective transmittance eta*T must be positive");
  }
  return t_eff;
}

Eigen::MatrixXd shrunk_covariance(const GaussianState& state, double t_eff) {
  int d = state.dim();
  return t_eff * state.gamma() + (2.0 - t_eff) * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

double no_click_probability(const GaussianState& state, double t, double eta) {
  if (state.mode_count() != 1) {
    throw DimensionMismatch("no_click_probability expects a single-mode state; use the multimode "
                            "variant for N modes");
  }
  double t_eff = validate_effective_transmittance(t, eta);
  Eigen::Matrix2d shrunk = shrunk_covariance(state, t_eff);
  double det = shrunk.determinant();
  const Eigen::VectorXd& xi = state.displacement();
  double quad = xi.dot(shrunk.inverse() * xi);
  return 2.0 / std::sqrt(det) * std::exp(-t_eff * quad);
}

double multimode_no_click_probability(const GaussianState& state, double t, double eta) {
  double t_eff = validate_effective_transmittance(t, eta);
  if (state.displacement().cwiseAbs().maxCoeff() > 1e-10) {
    throw NonzeroDisplacement(
        "multimode no-click probability requires zero displacement; run the two-copy "
        "preparation first");
  }
  double det = shrunk_covariance(state, t_eff).determinant();
  return std::pow(2.0, state.mode_count()) / std::sqrt(det);
}

double setting_probability(const GaussianState& state, const DetectorSetting& setting) {
  if (state.mode_count() == 1) {
    return no_click_probability(state, setting.transmittance, setting.efficiency);
  }
  return multimode_no_click_probability(state, setting.transmittance, setting.efficiency);
}

std::vector<std::uint8_t> simulate_shot_trace(const GaussianState& state,
                                              const DetectorSetting& setting, std::uint64_t seed,
                                              std::uint64_t stream_index) {
  if (setting.shots <= 0) {
    throw InvalidParameter("shot count must be positive");
  }
  double p = setting_probability(state, setting);
  PhiloxStream stream(seed, stream_index);
  std::vector<std::uint8_t> trace(static_cast<std::size_t>(setting.shots));
  for (auto& shot : trace) {
    shot = stream.next_double() < p ? 1 : 0;
  }
  return trace;
}

TallyTable simulate_tallies(const GaussianState& state, const SettingSchedule& schedule) {
  if (schedule.settings.empty()) {
    throw InvalidParameter("schedule has no settings");
  }
  TallyTable table;
  table.rng_seed = schedule.rng_seed;
  table.rows.reserve(schedule.settings.size());
  for (std::size_t i = 0; i < schedule.settings.size(); i++) {
    const DetectorSetting& setting = schedule.settings[i];
    if (setting.shots <= 0) {
      throw InvalidParameter("setting '" + setting.label + "' has non-positive shot count");
    }
    TallyRow row;
    row.setting = setting;
    if (setting.shots <= kShotTraceThreshold) {
      std::int64_t count = 0;
      for (std::uint8_t shot : simulate_shot_trace(state, setting, schedule.rng_seed, i)) {
        count += shot;
      }
      row.no_click_count = count;
    } else {
      double p = setting_probability(state, setting);
      PhiloxStream stream(schedule.rng_seed, i);
      row.no_click_count = sample_binomial(stream, setting.shots, p);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

GaussianState prepare_minus_mode(const GaussianState& state) {
  int n = state.mode_count();
  GaussianState two_copies = tensor_product(state, state);
  for (int m = 0; m < n; m++) {
    two_copies = apply_beam_splitter(two_copies, m, n + m, 0.5);
  }
  std::vector<int> minus_modes(n);
  for (int m = 0; m < n; m++) {
    minus_modes[m] = n + m;
  }
  return reduce(two_copies, minus_modes);
}

}  // namespace noclick
