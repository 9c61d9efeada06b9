#include "noclick/entanglement.hpp"

#include "noclick/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace noclick {

namespace {

constexpr double kDiscriminantClipTol = 1e-9;

double seralian(const TwoModeDeterminants& dets) {
  if (!dets.det_sigma.has_value()) {
    throw MissingSigma("det_sigma is required for the partial-transpose spectrum");
  }
  return dets.det_a + dets.det_b - 2.0 * dets.det_sigma.value();
}

// zeta2 with the discriminant and the root clamped at zero, for finite
// differencing near the separability boundary.
double zeta2_clipped(double det_a, double det_b, double det_sigma, double det_ab) {
  double d = det_a + det_b - 2.0 * det_sigma;
  double disc = std::max(d * d - 4.0 * det_ab, 0.0);
  return std::sqrt(std::max(0.5 * (d - std::sqrt(disc)), 0.0));
}

CriterionResult band_verdict(double margin, double se_margin, double band_sigmas,
                             double extra_band) {
  CriterionResult result;
  result.margin = margin;
  result.threshold = band_sigmas * se_margin + extra_band;
  if (margin > result.threshold) {
    result.verdict = Verdict::Detected;
  } else if (margin < -result.threshold) {
    result.verdict = Verdict::NotDetected;
  } else {
    result.verdict = Verdict::Inconclusive;
  }
  return result;
}

}  // namespace

namespace {

std::pair<double, double> spectrum_with_band(const TwoModeDeterminants& dets, double band) {
  double d = seralian(dets);
  double disc = d * d - 4.0 * dets.det_ab;
  if (disc < -band) {
    throw NegativeDiscriminant("D^2 - 4 det(gamma_AB) = " + std::to_string(disc) +
                               "; block determinants are inconsistent");
  }
  double root = std::sqrt(std::max(disc, 0.0));
  double zeta2_sq = 0.5 * (d - root);
  double zeta1_sq = 0.5 * (d + root);
  if (!(zeta2_sq > 0.0)) {
    throw NonpositiveRoot("smaller PT symplectic eigenvalue squared is " +
                          std::to_string(zeta2_sq));
  }
  return {std::sqrt(zeta1_sq), std::sqrt(zeta2_sq)};
}

}  // namespace

std::pair<double, double> symplectic_pt_spectrum(const TwoModeDeterminants& dets) {
  return spectrum_with_band(dets, kDiscriminantClipTol);
}

std::pair<double, double> symplectic_pt_spectrum_banded(const TwoModeDeterminants& dets,
                                                        double band_sigmas) {
  double d = seralian(dets);
  double var_block = dets.se_det_a * dets.se_det_a + dets.se_det_b * dets.se_det_b +
                     4.0 * dets.se_det_sigma * dets.se_det_sigma;
  double var_disc = 4.0 * d * d * var_block + 16.0 * dets.se_det_ab * dets.se_det_ab;
  double band = std::max(kDiscriminantClipTol, band_sigmas * std::sqrt(std::max(var_disc, 0.0)));
  return spectrum_with_band(dets, band);
}

double log_negativity(double zeta2) {
  if (!(zeta2 > 0.0) || !std::isfinite(zeta2)) {
    throw InvalidParameter("zeta2 must be positive and finite");
  }
  return std::max(0.0, -std::log2(zeta2));
}

CriterionResult criterion_nec_suf(const TwoModeDeterminants& dets, double band_sigmas,
                                  double extra_band) {
  double margin = seralian(dets) - 1.0 - dets.det_ab;
  double se = std::sqrt(dets.se_det_a * dets.se_det_a + dets.se_det_b * dets.se_det_b +
                        4.0 * dets.se_det_sigma * dets.se_det_sigma +
                        dets.se_det_ab * dets.se_det_ab);
  return band_verdict(margin, se, band_sigmas, extra_band);
}

CriterionResult criterion_local_sufficient(const TwoModeDeterminants& dets, double band_sigmas,
                                           double extra_band) {
  double margin = dets.det_a + dets.det_b - 1.0 - dets.det_ab;
  double se = std::sqrt(dets.se_det_a * dets.se_det_a + dets.se_det_b * dets.se_det_b +
                        dets.se_det_ab * dets.se_det_ab);
  return band_verdict(margin, se, band_sigmas, extra_band);
}

CriterionResult criterion_local_sufficient(double det_a, double det_b, double det_ab,
                                           double band_sigmas, double extra_band) {
  TwoModeDeterminants dets;
  dets.det_a = det_a;
  dets.det_b = det_b;
  dets.det_ab = det_ab;
  return criterion_local_sufficient(dets, band_sigmas, extra_band);
}

double sigma_from_sums(double det_plus, double det_minus, double det_a_plus_b_half) {
  return 2.0 * det_plus + 2.0 * det_minus - 4.0 * det_a_plus_b_half;
}

std::pair<double, double> sigma_det_from_phases(double y0, double y_quarter, double y_half) {
  double y_tilde = y_quarter - 0.5 * (y0 + y_half);
  double delta = y0 - y_half;
  double radius = std::sqrt(delta * delta + 4.0 * y_tilde * y_tilde);
  double det_sigma = 0.125 * (y0 + y_half + radius);
  // y_phi flat within roundoff means every phase maximizes; report 0 then.
  double tie_tol = 1e-12 * std::max({1.0, std::fabs(y0), std::fabs(y_quarter), std::fabs(y_half)});
  double phi_star = 0.0;
  if (radius > tie_tol) {
    phi_star = 0.5 * std::atan2(2.0 * y_tilde, delta);
    if (phi_star < 0.0) {
      phi_star += std::numbers::pi;
    }
  }
  return {det_sigma, phi_star};
}

double sigma_det_standard_error(double y0, double y_quarter, double y_half, double se_y0,
                                double se_y_quarter, double se_y_half) {
  double scale = std::max({1.0, std::fabs(y0), std::fabs(y_quarter), std::fabs(y_half)});
  double step = 1e-6 * scale;
  auto det_at = [](double a, double b, double c) { return sigma_det_from_phases(a, b, c).first; };
  double g0 = (det_at(y0 + step, y_quarter, y_half) - det_at(y0 - step, y_quarter, y_half)) /
              (2.0 * step);
  double gq = (det_at(y0, y_quarter + step, y_half) - det_at(y0, y_quarter - step, y_half)) /
              (2.0 * step);
  double gh = (det_at(y0, y_quarter, y_half + step) - det_at(y0, y_quarter, y_half - step)) /
              (2.0 * step);
  return std::sqrt(g0 * g0 * se_y0 * se_y0 + gq * gq * se_y_quarter * se_y_quarter +
                   gh * gh * se_y_half * se_y_half);
}

double zeta2_standard_error(const TwoModeDeterminants& dets) {
  if (!dets.det_sigma.has_value()) {
    throw MissingSigma("det_sigma is required for the zeta2 standard error");
  }
  double values[4] = {dets.det_a, dets.det_b, dets.det_sigma.value(), dets.det_ab};
  double errors[4] = {dets.se_det_a, dets.se_det_b, dets.se_det_sigma, dets.se_det_ab};
  double variance = 0.0;
  for (int i = 0; i < 4; i++) {
    if (errors[i] == 0.0) {
      continue;
    }
    double step = 1e-6 * std::max(1.0, std::fabs(values[i]));
    double bumped[4] = {values[0], values[1], values[2], values[3]};
    bumped[i] = values[i] + step;
    double plus = zeta2_clipped(bumped[0], bumped[1], bumped[2], bumped[3]);
    bumped[i] = values[i] - step;
    double minus = zeta2_clipped(bumped[0], bumped[1], bumped[2], bumped[3]);
    double g = (plus - minus) / (2.0 * step);
    variance += g * g * errors[i] * errors[i];
  }
  return std::sqrt(variance);
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& gamma) {
  if (gamma.mode_count() != 2) {
    throw DimensionMismatch("partial transpose is defined here for two-mode states only");
  }
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(4);
  flip(3) = -1.0;
  Eigen::MatrixXd transposed = flip.asDiagonal() * gamma.entries() * flip.asDiagonal();
  return CovarianceMatrix(transposed);
}

TwoModeDeterminants exact_two_mode_determinants(const GaussianState& state) {
  if (state.mode_count() != 2) {
    throw DimensionMismatch("block determinants require a two-mode state");
  }
  const Eigen::MatrixXd& g = state.gamma();
  TwoModeDeterminants dets;
  dets.det_a = g.block<2, 2>(0, 0).determinant();
  dets.det_b = g.block<2, 2>(2, 2).determinant();
  dets.det_sigma = g.block<2, 2>(0, 2).determinant();
  dets.det_ab = g.determinant();
  return dets;
}

}  // namespace noclick
