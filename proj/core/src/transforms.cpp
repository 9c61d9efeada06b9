#include "noclick/transforms.hpp"

#include <cmath>
#include <set>
#include <string>

namespace noclick {

namespace {

void validate_mode_index(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.mode_count()) {
    throw IndexOutOfRange("mode index " + std::to_string(mode) + " out of range for " +
                          std::to_string(state.mode_count()) + " modes");
  }
}

}  // namespace

GaussianState apply_beam_splitter(const GaussianState& state, int mode_a, int mode_b, double t) {
  validate_mode_index(state, mode_a);
  validate_mode_index(state, mode_b);
  if (mode_a == mode_b) {
    throw InvalidParameter("beam splitter needs two distinct modes");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidParameter("transmittance must lie in [0, 1]");
  }
  double ct = std::sqrt(t);
  double st = std::sqrt(1.0 - t);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(state.dim(), state.dim());
  for (int q = 0; q < 2; q++) {
    int ia = 2 * mode_a + q;
    int ib = 2 * mode_b + q;
    s(ia, ia) = ct;
    s(ia, ib) = st;
    s(ib, ia) = -st;
    s(ib, ib) = ct;
  }
  return make_state(s * state.displacement(), s * state.gamma() * s.transpose());
}

GaussianState apply_phase_shift(const GaussianState& state, int mode, double phi) {
  validate_mode_index(state, mode);
  if (!std::isfinite(phi)) {
    throw InvalidParameter("phase must be finite");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(state.dim(), state.dim());
  int i = 2 * mode;
  s(i, i) = std::cos(phi);
  s(i, i + 1) = -std::sin(phi);
  s(i + 1, i) = std::sin(phi);
  s(i + 1, i + 1) = std::cos(phi);
  return make_state(s * state.displacement(), s * state.gamma() * s.transpose());
}

GaussianState apply_loss(const GaussianState& state, int mode, double eta) {
  validate_mode_index(state, mode);
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("loss transmissivity must lie in [0, 1]");
  }
  double root = std::sqrt(eta);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(state.dim());
  scale(2 * mode) = root;
  scale(2 * mode + 1) = root;
  Eigen::VectorXd xi = scale.asDiagonal() * state.displacement();
  Eigen::MatrixXd gamma = scale.asDiagonal() * state.gamma() * scale.asDiagonal();
  gamma(2 * mode, 2 * mode) += 1.0 - eta;
  gamma(2 * mode + 1, 2 * mode + 1) += 1.0 - eta;
  return make_state(xi, gamma);
}

GaussianState reduce(const GaussianState& state, const std::vector<int>& modes) {
  if (modes.empty()) {
    throw InvalidParameter("reduce needs at least one mode");
  }
  std::set<int> seen;
  for (int m : modes) {
    validate_mode_index(state, m);
    if (!seen.insert(m).second) {
      throw InvalidParameter("reduce modes must be distinct");
    }
  }
  int n = static_cast<int>(modes.size());
  Eigen::VectorXd xi(2 * n);
  Eigen::MatrixXd gamma(2 * n, 2 * n);
  for (int i = 0; i < n; i++) {
    for (int qi = 0; qi < 2; qi++) {
      xi(2 * i + qi) = state.displacement()(2 * modes[i] + qi);
      for (int j = 0; j < n; j++) {
        for (int qj = 0; qj < 2; qj++) {
          gamma(2 * i + qi, 2 * j + qj) = state.gamma()(2 * modes[i] + qi, 2 * modes[j] + qj);
        }
      }
    }
  }
  return make_state(xi, gamma);
}

}  // namespace noclick
