#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "noclick/entanglement.hpp"
#include "noclick/errors.hpp"
#include "noclick/state.hpp"
#include "noclick/states.hpp"
#include "noclick/transforms.hpp"
#include "support/oracles.hpp"

using namespace noclick;
namespace oracle = noclick::testing;

namespace {

TwoModeDeterminants tmsv_determinants(double r) {
  TwoModeDeterminants dets;
  double ch = std::cosh(2.0 * r);
  double sh = std::sinh(2.0 * r);
  dets.det_a = ch * ch;
  dets.det_b = ch * ch;
  dets.det_sigma = -sh * sh;
  dets.det_ab = 1.0;
  return dets;
}

// y_phi = det(sigma U(phi) + (sigma U(phi))^T) evaluated directly.
double y_of_phi(const Eigen::Matrix2d& sigma, double phi) {
  Eigen::Matrix2d u;
  u << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  Eigen::Matrix2d rotated = sigma * u;
  return (rotated + rotated.transpose()).determinant();
}

}  // namespace

TEST_CASE("partial-transpose spectrum from block determinants") {
  double r = 0.3;
  auto [zeta1, zeta2] = symplectic_pt_spectrum(tmsv_determinants(r));
  CHECK(zeta2 == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-12));
  CHECK(zeta1 == doctest::Approx(std::exp(2.0 * r)).epsilon(1e-12));

  TwoModeDeterminants vac;
  vac.det_sigma = 0.0;
  auto [v1, v2] = symplectic_pt_spectrum(vac);
  CHECK(v1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v2 == doctest::Approx(1.0).epsilon(1e-14));

  // Two uncorrelated thermal states: both roots sit at 2*nbar + 1.
  TwoModeDeterminants th;
  th.det_a = 9.0;
  th.det_b = 9.0;
  th.det_sigma = 0.0;
  th.det_ab = 81.0;
  auto [t1, t2] = symplectic_pt_spectrum(th);
  CHECK(t1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t2 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("partial-transpose spectrum error paths") {
  TwoModeDeterminants no_sigma;
  CHECK_THROWS_AS(symplectic_pt_spectrum(no_sigma), MissingSigma);

  TwoModeDeterminants bad = tmsv_determinants(0.0);
  bad.det_ab = 1.1;  // D = 2, so D^2 - 4 det_AB = -0.4
  CHECK_THROWS_AS(symplectic_pt_spectrum(bad), NegativeDiscriminant);

  TwoModeDeterminants negative_ab = tmsv_determinants(0.0);
  negative_ab.det_ab = -1.0;  // sqrt(disc) exceeds D, zeta2^2 < 0
  CHECK_THROWS_AS(symplectic_pt_spectrum(negative_ab), NonpositiveRoot);
}

TEST_CASE("noise-banded spectrum tolerates a statistically negative discriminant") {
  TwoModeDeterminants noisy = tmsv_determinants(0.3);
  noisy.det_ab = 3.83;  // drawn high: D^2 - 4 det_AB ~ -2.2
  noisy.se_det_a = 0.02;
  noisy.se_det_b = 0.02;
  noisy.se_det_sigma = 0.02;
  noisy.se_det_ab = 2.9;
  CHECK_THROWS_AS(symplectic_pt_spectrum(noisy), NegativeDiscriminant);
  auto [z1, z2] = symplectic_pt_spectrum_banded(noisy, 6.0);
  double d = noisy.det_a + noisy.det_b - 2.0 * noisy.det_sigma.value();
  CHECK(z1 == doctest::Approx(std::sqrt(d / 2.0)).epsilon(1e-12));
  CHECK(z2 == doctest::Approx(z1).epsilon(1e-12));

  // With exact inputs the band collapses back to the strict clip.
  TwoModeDeterminants exact = noisy;
  exact.se_det_a = exact.se_det_b = exact.se_det_sigma = exact.se_det_ab = 0.0;
  CHECK_THROWS_AS(symplectic_pt_spectrum_banded(exact, 6.0), NegativeDiscriminant);
}

TEST_CASE("log negativity clamps at the separability boundary") {
  CHECK(log_negativity(1.0) == 0.0);
  CHECK(log_negativity(2.0) == 0.0);
  CHECK(log_negativity(std::exp(-0.6)) == doctest::Approx(0.6 / std::numbers::ln2).epsilon(1e-12));
  CHECK_THROWS_AS(log_negativity(0.0), InvalidParameter);
  CHECK_THROWS_AS(log_negativity(-1.0), InvalidParameter);
}

TEST_CASE("full criterion detects exactly the right states") {
  CHECK(criterion_nec_suf(tmsv_determinants(0.3)).verdict == Verdict::Detected);
  CHECK(criterion_nec_suf(tmsv_determinants(0.3)).margin ==
        doctest::Approx(2.0 * std::cosh(1.2) - 2.0).epsilon(1e-12));

  // Vacuum x vacuum sits exactly on the boundary.
  TwoModeDeterminants vac;
  vac.det_sigma = 0.0;
  CHECK_FALSE(criterion_nec_suf(vac).detected());

  // Classically correlated state: separable, correlated, firmly rejected.
  TwoModeDeterminants classical;
  classical.det_a = 2.25;
  classical.det_b = 2.25;
  classical.det_sigma = 0.16;
  classical.det_ab = (2.25 - 0.16) * (2.25 - 0.16);
  CHECK(criterion_nec_suf(classical).verdict == Verdict::NotDetected);
  // Physicality of that construction, via the PT spectrum staying >= 1.
  auto [c1, c2] = symplectic_pt_spectrum(classical);
  CHECK(c2 >= 1.0);

  TwoModeDeterminants missing;
  CHECK_THROWS_AS(criterion_nec_suf(missing), MissingSigma);

  // Large errors push a true detection into the inconclusive band.
  TwoModeDeterminants noisy = tmsv_determinants(0.1);
  noisy.se_det_ab = 1.0;
  CHECK(criterion_nec_suf(noisy).verdict == Verdict::Inconclusive);
}

TEST_CASE("local criterion is sufficient but not necessary") {
  TwoModeDeterminants tmsv = tmsv_determinants(0.3);
  CHECK(criterion_local_sufficient(tmsv).detected());
  CHECK(criterion_local_sufficient(tmsv.det_a, tmsv.det_b, tmsv.det_ab).detected());

  // gamma_A = gamma_B = 1.2 I with sigma = diag(c, -c), c^2 = 0.06: the
  // state is entangled (PT eigenvalue below 1) and the full criterion sees
  // it, but the local one does not.
  TwoModeDeterminants weak;
  weak.det_a = 1.44;
  weak.det_b = 1.44;
  weak.det_sigma = -0.06;
  weak.det_ab = 1.38 * 1.38;
  auto [w1, w2] = symplectic_pt_spectrum(weak);
  CHECK(w2 < 1.0);
  CHECK(criterion_nec_suf(weak).detected());
  CHECK_FALSE(criterion_local_sufficient(weak).detected());

  TwoModeDeterminants vac;
  CHECK_FALSE(criterion_local_sufficient(vac).detected());
}

TEST_CASE("every local detection is also a full detection") {
  PhiloxStream rng(1111, 0);
  int locally_detected = 0;
  for (int trial = 0; trial < 500; trial++) {
    Eigen::MatrixXd gamma = oracle::random_physical_covariance(rng, 2, 0.7, 0.2);
    GaussianState state = make_state(Eigen::VectorXd::Zero(4), gamma);
    TwoModeDeterminants dets = exact_two_mode_determinants(state);
    if (criterion_local_sufficient(dets).detected()) {
      locally_detected++;
      CHECK(criterion_nec_suf(dets).detected());
    }
  }
  // The sweep must actually exercise the implication.
  CHECK(locally_detected > 10);
}

TEST_CASE("sum-circuit identity recovers det(sigma + sigma^T)") {
  CHECK(sigma_from_sums(1.0, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));

  double sh = std::sinh(0.6);
  double ch = std::cosh(0.6);
  CHECK(sigma_from_sums(1.0, 1.0, ch * ch) == doctest::Approx(-4.0 * sh * sh).epsilon(1e-12));

  // Circuit-level identity on random states: plus/minus dets from a real
  // balanced beam splitter, the sum det from two independent copies.
  PhiloxStream rng(2222, 0);
  for (int trial = 0; trial < 100; trial++) {
    Eigen::MatrixXd gamma = oracle::random_physical_covariance(rng, 2, 0.6, 1.2);
    GaussianState state = make_state(Eigen::VectorXd::Zero(4), gamma);
    GaussianState mixed = apply_beam_splitter(state, 0, 1, 0.5);
    double det_plus = reduce(mixed, {0}).gamma().determinant();
    double det_minus = reduce(mixed, {1}).gamma().determinant();
    GaussianState copies = tensor_product(state, state);
    GaussianState cross = apply_beam_splitter(copies, 0, 3, 0.5);
    double det_sum = reduce(cross, {0}).gamma().determinant();

    Eigen::Matrix2d sigma = gamma.topRightCorner(2, 2);
    double direct = (sigma + sigma.transpose()).determinant();
    CHECK(sigma_from_sums(det_plus, det_minus, det_sum) ==
          doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("phase protocol recovers det(sigma) and the maximizing phase") {
  Eigen::Matrix2d sigma_tmsv;
  sigma_tmsv << std::sinh(0.6), 0.0, 0.0, -std::sinh(0.6);
  double y0 = y_of_phi(sigma_tmsv, 0.0);
  double yq = y_of_phi(sigma_tmsv, std::numbers::pi / 4.0);
  double yh = y_of_phi(sigma_tmsv, std::numbers::pi / 2.0);
  auto [det_sigma, phi_star] = sigma_det_from_phases(y0, yq, yh);
  CHECK(det_sigma == doctest::Approx(-std::sinh(0.6) * std::sinh(0.6)).epsilon(1e-12));
  CHECK(phi_star == 0.0);

  // Rotation family: sigma = c U(phi0) has det c^2 for every phi0, and the
  // closed-form maximizer must agree with a dense grid scan.
  PhiloxStream rng(3333, 0);
  for (int trial = 0; trial < 50; trial++) {
    double c = 0.2 + rng.next_double();
    double phi0 = 2.0 * std::numbers::pi * rng.next_double();
    Eigen::Matrix2d rot;
    rot << std::cos(phi0), std::sin(phi0), -std::sin(phi0), std::cos(phi0);
    Eigen::Matrix2d sigma = c * rot;
    double a0 = y_of_phi(sigma, 0.0);
    double aq = y_of_phi(sigma, std::numbers::pi / 4.0);
    double ah = y_of_phi(sigma, std::numbers::pi / 2.0);
    auto [det_s, phi_max] = sigma_det_from_phases(a0, aq, ah);
    CHECK(det_s == doctest::Approx(c * c).epsilon(1e-10));
    CHECK(phi_max >= 0.0);
    CHECK(phi_max < std::numbers::pi);
    double best = -1e300;
    for (int k = 0; k < 10000; k++) {
      best = std::max(best, y_of_phi(sigma, std::numbers::pi * k / 10000.0));
    }
    // The grid undershoots the true peak by at most the curvature over half
    // a step, so the closed-form maximizer may only exceed it by that much.
    double amp = std::hypot(0.5 * (a0 - ah), aq - 0.5 * (a0 + ah));
    double step = std::numbers::pi / 10000.0;
    double peak = y_of_phi(sigma, phi_max);
    CHECK(peak >= best - 1e-12);
    CHECK(peak <= best + amp * step * step + 1e-12);
  }

  // Exact tie: every phase is a maximizer, zero is reported by convention.
  auto [tied_det, tied_phi] = sigma_det_from_phases(2.0, 2.0, 2.0);
  CHECK(tied_phi == 0.0);
  CHECK(tied_det == doctest::Approx(0.5).epsilon(1e-14));
  auto [zero_det, zero_phi] = sigma_det_from_phases(0.0, 0.0, 0.0);
  CHECK(zero_det == 0.0);
  CHECK(zero_phi == 0.0);
}

TEST_CASE("phase-protocol standard error propagates all three measurements") {
  CHECK(sigma_det_standard_error(1.0, 0.5, -0.2, 0.0, 0.0, 0.0) == 0.0);
  double se = sigma_det_standard_error(1.0, 0.5, -0.2, 0.01, 0.02, 0.015);
  CHECK(se > 0.0);
  // Scaling every input error scales the output linearly.
  CHECK(sigma_det_standard_error(1.0, 0.5, -0.2, 0.02, 0.04, 0.03) ==
        doctest::Approx(2.0 * se).epsilon(1e-9));
}

TEST_CASE("zeta2 error matches a manual perturbation") {
  TwoModeDeterminants dets = tmsv_determinants(0.3);
  dets.se_det_a = 0.01;
  dets.se_det_b = 0.02;
  dets.se_det_sigma = 0.005;
  dets.se_det_ab = 0.03;
  double se = zeta2_standard_error(dets);
  CHECK(se > 0.0);

  auto zeta2_at = [&dets](int which, double delta) {
    TwoModeDeterminants d = dets;
    switch (which) {
      case 0: d.det_a += delta; break;
      case 1: d.det_b += delta; break;
      case 2: d.det_sigma = d.det_sigma.value() + delta; break;
      default: d.det_ab += delta; break;
    }
    return symplectic_pt_spectrum(d).second;
  };
  double errs[4] = {dets.se_det_a, dets.se_det_b, dets.se_det_sigma, dets.se_det_ab};
  double h = 1e-6;
  double grad_sq = 0.0;
  for (int which = 0; which < 4; which++) {
    double grad = (zeta2_at(which, h) - zeta2_at(which, -h)) / (2.0 * h);
    grad_sq += grad * grad * errs[which] * errs[which];
  }
  CHECK(se == doctest::Approx(std::sqrt(grad_sq)).epsilon(1e-3));
}

TEST_CASE("covariance-level partial transpose agrees with the determinant route") {
  double r = 0.4;
  GaussianState tmsv = two_mode_squeezed_vacuum(r);
  CovarianceMatrix pt = partial_transpose(tmsv.covariance());
  std::vector<double> moduli = symplectic_spectrum(pt.entries());
  CHECK(moduli.back() == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-10));
  CHECK(moduli.front() == doctest::Approx(std::exp(2.0 * r)).epsilon(1e-10));

  PhiloxStream rng(4444, 0);
  for (int trial = 0; trial < 200; trial++) {
    Eigen::MatrixXd gamma = oracle::random_physical_covariance(rng, 2, 0.7, 1.5);
    GaussianState state = make_state(Eigen::VectorXd::Zero(4), gamma);
    auto [z1, z2] = symplectic_pt_spectrum(exact_two_mode_determinants(state));
    std::vector<double> spec = symplectic_spectrum(partial_transpose(state.covariance()).entries());
    CHECK(z2 == doctest::Approx(spec.back()).epsilon(1e-9));
    CHECK(z1 == doctest::Approx(spec.front()).epsilon(1e-9));
  }
}

TEST_CASE("exact block determinants of reference states") {
  double r = 0.3;
  TwoModeDeterminants dets = exact_two_mode_determinants(two_mode_squeezed_vacuum(r));
  double ch = std::cosh(0.6);
  double sh = std::sinh(0.6);
  CHECK(dets.det_a == doctest::Approx(ch * ch).epsilon(1e-12));
  CHECK(dets.det_b == doctest::Approx(ch * ch).epsilon(1e-12));
  CHECK(dets.det_sigma.value() == doctest::Approx(-sh * sh).epsilon(1e-12));
  CHECK(dets.det_ab == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dets.se_det_a == 0.0);
  CHECK(dets.se_det_ab == 0.0);
}

TEST_CASE("negativity is invariant under local phase shifts") {
  PhiloxStream rng(5555, 0);
  for (int trial = 0; trial < 100; trial++) {
    Eigen::MatrixXd gamma = oracle::random_physical_covariance(rng, 2, 0.6, 1.0);
    GaussianState state = make_state(Eigen::VectorXd::Zero(4), gamma);
    double base = symplectic_pt_spectrum(exact_two_mode_determinants(state)).second;
    int mode = static_cast<int>(rng.next_u64() % 2);
    double phi = 2.0 * std::numbers::pi * rng.next_double();
    GaussianState turned = apply_phase_shift(state, mode, phi);
    double shifted = symplectic_pt_spectrum(exact_two_mode_determinants(turned)).second;
    CHECK(log_negativity(shifted) == doctest::Approx(log_negativity(base)).epsilon(1e-9));
  }
}
