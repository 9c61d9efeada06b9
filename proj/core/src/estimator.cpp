#include "noclick/estimator.hpp"

#include "noclick/uncertainty.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace noclick {

namespace {

constexpr double kDegenerateTransmittanceTol = 1e-6;
constexpr double kDiscriminantClipTol = 1e-9;
constexpr double kConditionNumberLimit = 1e12;
constexpr double kRelativeDiffStep = 1e-6;
// Exact-probability estimates of pure states land on the physical boundary
// up to rounding; the classification grants that much slack.
constexpr double kBoundarySlack = 1e-12;

struct Observation {
  double phat = 0.0;
  double var_phat = 0.0;
  double t_eff = 0.0;
};

struct ObservationSet {
  std::vector<Observation> rows;
  bool wilson_fallback = false;
  std::vector<std::string> dropped;
};

void validate_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidProbability("no-click probability must lie in (0, 1]");
  }
}

void validate_transmittance(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw InvalidParameter("effective transmittance must lie in (0, 1]");
  }
}

ObservationSet observations_from_tally(const TallyTable& tally) {
  ObservationSet set;
  for (const TallyRow& row : tally.rows) {
    if (row.no_click_count == 0) {
      // 1/P^2 diverges, so an all-click row carries no usable signal.
      set.dropped.push_back(row.setting.label);
      continue;
    }
    Observation obs;
    obs.t_eff = row.setting.effective_transmittance();
    validate_transmittance(obs.t_eff);
    PhatEstimate phat = phat_from_counts(row.no_click_count, row.setting.shots);
    obs.phat = phat.phat;
    obs.var_phat = phat.variance;
    set.wilson_fallback = set.wilson_fallback || phat.wilson;
    set.rows.push_back(obs);
  }
  return set;
}

ObservationSet observations_exact(const std::vector<double>& p, const std::vector<double>& t_eff) {
  if (p.size() != t_eff.size()) {
    throw DimensionMismatch("probability and transmittance lists differ in length");
  }
  ObservationSet set;
  set.rows.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); i++) {
    validate_probability(p[i]);
    validate_transmittance(t_eff[i]);
    set.rows.push_back({p[i], 0.0, t_eff[i]});
  }
  return set;
}

// lambda with sub-resolution discriminants snapped to the degenerate point.
// Keeping a rounding-scale positive discriminant would inject sqrt(eps)
// noise into lambda for equal-eigenvalue states.
double lambda_clipped(double tr, double det) {
  double disc = tr * tr - 4.0 * det;
  if (disc < kDiscriminantClipTol * std::max(1.0, tr * tr)) {
    return 0.5 * tr;
  }
  return 0.5 * (tr - std::sqrt(disc));
}

double central_difference(double minus, double plus, double step) { return (plus - minus) / (2.0 * step); }

struct DesignSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd var_b;
};

DesignSystem build_design(const ObservationSet& obs, int mode_count) {
  int dim = 2 * mode_count;
  int k = static_cast<int>(obs.rows.size());
  DesignSystem sys;
  sys.a.resize(k, dim);
  sys.b.resize(k);
  sys.var_b.resize(k);
  double two_pow = std::pow(2.0, 2 * mode_count);
  for (int j = 0; j < k; j++) {
    double t = obs.rows[j].t_eff;
    double p = obs.rows[j].phat;
    for (int n = 1; n <= dim; n++) {
      sys.a(j, n - 1) = std::pow(t, n) * std::pow(2.0 - t, dim - n);
    }
    sys.b(j) = two_pow / (p * p) - std::pow(2.0 - t, dim);
    double db_dp = -2.0 * two_pow / (p * p * p);
    sys.var_b(j) = db_dp * db_dp * obs.rows[j].var_phat;
  }
  return sys;
}

struct SolvedSystem {
  Eigen::VectorXd f;
  Eigen::MatrixXd cov_f;
  double condition_number = 0.0;
};

SolvedSystem solve_design(const DesignSystem& sys, int mode_count) {
  int dim = 2 * mode_count;
  int k = static_cast<int>(sys.a.rows());
  bool exact_inputs = sys.var_b.maxCoeff() == 0.0;

  Eigen::MatrixXd scaled_a = sys.a;
  Eigen::VectorXd scaled_b = sys.b;
  if (k > dim && !exact_inputs) {
    for (int j = 0; j < k; j++) {
      double w = 1.0 / std::sqrt(sys.var_b(j));
      scaled_a.row(j) *= w;
      scaled_b(j) *= w;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled_a);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kConditionNumberLimit)) {
    throw IllConditioned("design matrix condition number " + std::to_string(cond) +
                         " exceeds 1e12; transmittances are too close or duplicated");
  }

  SolvedSystem out;
  out.condition_number = cond;
  if (k == dim) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.a);
    out.f = lu.solve(sys.b);
    Eigen::MatrixXd inv = lu.inverse();
    out.cov_f = inv * sys.var_b.asDiagonal() * inv.transpose();
  } else if (exact_inputs) {
    out.f = scaled_a.colPivHouseholderQr().solve(scaled_b);
    out.cov_f = Eigen::MatrixXd::Zero(dim, dim);
  } else {
    out.f = scaled_a.colPivHouseholderQr().solve(scaled_b);
    out.cov_f = (scaled_a.transpose() * scaled_a).ldlt().solve(
        Eigen::MatrixXd::Identity(dim, dim));
  }
  return out;
}

}  // namespace

std::pair<double, double> invert_single_mode(double p1, double t1, double p2, double t2) {
  validate_transmittance(t1);
  validate_transmittance(t2);
  if (std::fabs(t1 - t2) < kDegenerateTransmittanceTol) {
    throw DegenerateSettings("transmittances are equal within 1e-6; the system is singular");
  }
  validate_probability(p1);
  validate_probability(p2);
  double tr = 2.0 / (t2 - t1) * (t2 / (t1 * p1 * p1) - t1 / (t2 * p2 * p2)) + 2.0 - 2.0 / t1 -
              2.0 / t2;
  double det = 2.0 / (t1 - t2) * ((2.0 - t2) / (t1 * p1 * p1) - (2.0 - t1) / (t2 * p2 * p2)) +
               (2.0 - t1) * (2.0 - t2) / (t1 * t2);
  return {tr, det};
}

double lambda_single_mode(double tr_gamma, double det_gamma) {
  double disc = tr_gamma * tr_gamma - 4.0 * det_gamma;
  if (disc < -kDiscriminantClipTol) {
    throw NegativeDiscriminant("Tr^2 - 4 det = " + std::to_string(disc) +
                               "; the invariant estimates are inconsistent");
  }
  if (disc < kDiscriminantClipTol * std::max(1.0, tr_gamma * tr_gamma)) {
    return 0.5 * tr_gamma;
  }
  return 0.5 * (tr_gamma - std::sqrt(disc));
}

MultimodeSolution solve_multimode(const std::vector<double>& p, const std::vector<double>& t,
                                  int mode_count, const std::vector<double>& weights) {
  if (mode_count < 1) {
    throw InvalidParameter("mode_count must be positive");
  }
  if (p.size() != t.size()) {
    throw DimensionMismatch("probability and transmittance lists differ in length");
  }
  if (static_cast<int>(p.size()) < 2 * mode_count) {
    throw InsufficientSettings("need at least " + std::to_string(2 * mode_count) +
                               " settings for " + std::to_string(mode_count) + " modes");
  }
  if (!weights.empty() && weights.size() != p.size()) {
    throw DimensionMismatch("weight list length does not match settings");
  }

  ObservationSet obs = observations_exact(p, t);
  DesignSystem sys = build_design(obs, mode_count);
  if (!weights.empty()) {
    for (std::size_t j = 0; j < weights.size(); j++) {
      if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
        throw InvalidParameter("weights must be finite and positive");
      }
      sys.var_b(static_cast<int>(j)) = 1.0 / weights[j];
    }
  }
  SolvedSystem solved = solve_design(sys, mode_count);

  MultimodeSolution out;
  out.coefficients.mode_count = mode_count;
  out.coefficients.f.assign(solved.f.data(), solved.f.data() + solved.f.size());
  out.condition_number = solved.condition_number;
  return out;
}

double lambda_multimode(const CharPolyCoefficients& coefficients) {
  int dim = 2 * coefficients.mode_count;
  if (coefficients.mode_count < 1 || static_cast<int>(coefficients.f.size()) != dim) {
    throw DimensionMismatch("coefficient list must hold 2N entries");
  }
  // Monic polynomial x^2N + sum_k a_k x^k with a_k = (-1)^k f_(2N-k).
  std::vector<double> a(dim);
  for (int k = 0; k < dim; k++) {
    double f = coefficients.f[dim - k - 1];
    if (!std::isfinite(f)) {
      throw InvalidParameter("coefficients must be finite");
    }
    a[k] = (k % 2 == 0) ? f : -f;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; i++) {
    companion(i + 1, i) = 1.0;
  }
  for (int i = 0; i < dim; i++) {
    companion(i, dim - 1) = -a[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("companion-matrix eigenvalue solve failed");
  }
  // Repeated eigenvalues (thermal states, TMSV) split into conjugate pairs
  // with imaginary parts of order sqrt(eps) under roundoff alone, so the
  // accept band must sit well above that.
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; i++) {
    std::complex<double> root = solver.eigenvalues()(i);
    double imag_tol = std::max(1e-8, 1e-6 * (1.0 + std::fabs(root.real())));
    if (std::fabs(root.imag()) <= imag_tol) {
      smallest = std::min(smallest, root.real());
    }
  }
  if (!std::isfinite(smallest)) {
    throw NoRealRoot("all polynomial roots have imaginary parts beyond tolerance");
  }
  return smallest;
}

double purity_from_det(double det_gamma) {
  if (!(det_gamma > 0.0) || !std::isfinite(det_gamma)) {
    throw NonpositiveDeterminant("det(gamma) must be positive, got " +
                                 std::to_string(det_gamma));
  }
  return 1.0 / std::sqrt(det_gamma);
}

namespace {

SingleModeEstimate finish_single_mode(double tr, double det, double var_tr, double var_det,
                                      double cov_tr_det, const ObservationSet& obs) {
  SingleModeEstimate est;
  est.tr_gamma = tr;
  est.det_gamma = det;
  est.se_tr_gamma = std::sqrt(std::max(var_tr, 0.0));
  est.se_det_gamma = std::sqrt(std::max(var_det, 0.0));
  // For states with (near-)equal eigenvalues the sampled discriminant is
  // negative about half the time; widen the clip band by its propagated
  // standard error so only genuinely inconsistent inputs fail.
  double disc = tr * tr - 4.0 * det;
  double var_disc = 4.0 * tr * tr * var_tr + 16.0 * var_det - 16.0 * tr * cov_tr_det;
  double disc_band = std::max(kDiscriminantClipTol, 6.0 * std::sqrt(std::max(var_disc, 0.0)));
  if (disc < -disc_band) {
    throw NegativeDiscriminant("Tr^2 - 4 det = " + std::to_string(disc) +
                               " is negative beyond the noise band " +
                               std::to_string(disc_band));
  }
  est.lambda = lambda_clipped(tr, det);
  est.purity = purity_from_det(det);

  double step_tr = kRelativeDiffStep * std::max(1.0, std::fabs(tr));
  double step_det = kRelativeDiffStep * std::max(1.0, std::fabs(det));
  double dl_dtr = central_difference(lambda_clipped(tr - step_tr, det),
                                     lambda_clipped(tr + step_tr, det), step_tr);
  double dl_ddet = central_difference(lambda_clipped(tr, det - step_det),
                                      lambda_clipped(tr, det + step_det), step_det);
  double var_lambda = dl_dtr * dl_dtr * var_tr + dl_ddet * dl_ddet * var_det +
                      2.0 * dl_dtr * dl_ddet * cov_tr_det;
  est.se_lambda = std::sqrt(std::max(var_lambda, 0.0));
  est.se_purity = 0.5 * std::pow(det, -1.5) * est.se_det_gamma;

  est.physical = det >= 1.0 - 3.0 * est.se_det_gamma - kBoundarySlack &&
                 tr >= 2.0 - 3.0 * est.se_tr_gamma - kBoundarySlack;
  est.distance_to_physical = std::max({0.0, 1.0 - det, 2.0 - tr});
  est.wilson_fallback = obs.wilson_fallback;
  est.dropped_rows = obs.dropped;
  return est;
}

SingleModeEstimate estimate_single_mode_from_observations(const ObservationSet& obs) {
  if (obs.rows.size() < 2) {
    throw InsufficientSettings("single-mode inversion needs at least 2 usable settings, have " +
                               std::to_string(obs.rows.size()));
  }
  if (obs.rows.size() == 2) {
    double p1 = obs.rows[0].phat, t1 = obs.rows[0].t_eff;
    double p2 = obs.rows[1].phat, t2 = obs.rows[1].t_eff;
    auto [tr, det] = invert_single_mode(p1, t1, p2, t2);
    // Analytic Jacobian of the two closed forms with respect to (P1, P2).
    double dtr_dp1 = -4.0 * t2 / ((t2 - t1) * t1 * p1 * p1 * p1);
    double dtr_dp2 = 4.0 * t1 / ((t2 - t1) * t2 * p2 * p2 * p2);
    double ddet_dp1 = -4.0 * (2.0 - t2) / ((t1 - t2) * t1 * p1 * p1 * p1);
    double ddet_dp2 = 4.0 * (2.0 - t1) / ((t1 - t2) * t2 * p2 * p2 * p2);
    double v1 = obs.rows[0].var_phat, v2 = obs.rows[1].var_phat;
    double var_tr = dtr_dp1 * dtr_dp1 * v1 + dtr_dp2 * dtr_dp2 * v2;
    double var_det = ddet_dp1 * ddet_dp1 * v1 + ddet_dp2 * ddet_dp2 * v2;
    double cov = dtr_dp1 * ddet_dp1 * v1 + dtr_dp2 * ddet_dp2 * v2;
    return finish_single_mode(tr, det, var_tr, var_det, cov, obs);
  }
  // Over-determined: same linear system as the multimode path at N = 1.
  DesignSystem sys = build_design(obs, 1);
  SolvedSystem solved = solve_design(sys, 1);
  return finish_single_mode(solved.f(0), solved.f(1), solved.cov_f(0, 0), solved.cov_f(1, 1),
                            solved.cov_f(0, 1), obs);
}

MultimodeEstimate estimate_multimode_from_observations(const ObservationSet& obs,
                                                       int mode_count) {
  if (mode_count < 1) {
    throw InvalidParameter("mode_count must be positive");
  }
  int dim = 2 * mode_count;
  if (static_cast<int>(obs.rows.size()) < dim) {
    throw InsufficientSettings("need at least " + std::to_string(dim) + " usable settings for " +
                               std::to_string(mode_count) + " modes, have " +
                               std::to_string(obs.rows.size()));
  }
  DesignSystem sys = build_design(obs, mode_count);
  SolvedSystem solved = solve_design(sys, mode_count);

  MultimodeEstimate est;
  est.f.mode_count = mode_count;
  est.f.f.assign(solved.f.data(), solved.f.data() + solved.f.size());
  est.se_f.resize(dim);
  for (int i = 0; i < dim; i++) {
    est.se_f[i] = std::sqrt(std::max(solved.cov_f(i, i), 0.0));
  }
  est.condition_number = solved.condition_number;
  // Noise can push a degenerate root pair off the real axis; the invariants
  // stay usable, so report lambda as unavailable rather than failing.
  bool lambda_found = true;
  try {
    est.lambda = lambda_multimode(est.f);
  } catch (const NoRealRoot&) {
    est.lambda = std::numeric_limits<double>::quiet_NaN();
    est.se_lambda = std::numeric_limits<double>::infinity();
    lambda_found = false;
  }

  if (lambda_found) {
    // Gradient of the smallest root with respect to each coefficient.
    Eigen::VectorXd grad(dim);
    for (int i = 0; i < dim; i++) {
      double step = kRelativeDiffStep * std::max(1.0, std::fabs(est.f.f[i]));
      CharPolyCoefficients bumped = est.f;
      double plus, minus;
      try {
        bumped.f[i] = est.f.f[i] + step;
        plus = lambda_multimode(bumped);
        bumped.f[i] = est.f.f[i] - step;
        minus = lambda_multimode(bumped);
        grad(i) = central_difference(minus, plus, step);
      } catch (const NoRealRoot&) {
        grad(i) = std::numeric_limits<double>::infinity();
      }
    }
    double var_lambda = grad.dot(solved.cov_f * grad);
    est.se_lambda = std::isfinite(var_lambda) ? std::sqrt(std::max(var_lambda, 0.0))
                                              : std::numeric_limits<double>::infinity();
  }

  double det = est.f.f[dim - 1];
  est.purity = purity_from_det(det);
  est.se_purity = 0.5 * std::pow(det, -1.5) * est.se_f[dim - 1];
  est.physical = det >= 1.0 - 3.0 * est.se_f[dim - 1] - kBoundarySlack;
  est.distance_to_physical = std::max(0.0, 1.0 - det);
  est.wilson_fallback = obs.wilson_fallback;
  est.dropped_rows = obs.dropped;
  return est;
}

}  // namespace

SingleModeEstimate estimate_single_mode(const TallyTable& tally) {
  return estimate_single_mode_from_observations(observations_from_tally(tally));
}

MultimodeEstimate estimate_multimode(const TallyTable& tally, int mode_count) {
  return estimate_multimode_from_observations(observations_from_tally(tally), mode_count);
}

SingleModeEstimate estimate_single_mode_exact(const std::vector<double>& p,
                                              const std::vector<double>& t_eff) {
  return estimate_single_mode_from_observations(observations_exact(p, t_eff));
}

MultimodeEstimate estimate_multimode_exact(const std::vector<double>& p,
                                           const std::vector<double>& t_eff, int mode_count) {
  return estimate_multimode_from_observations(observations_exact(p, t_eff), mode_count);
}

}  // namespace noclick
