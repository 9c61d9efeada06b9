#pragma once

#include "noclick/state.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace noclick {

// Determinants of the 2x2 blocks of a two-mode covariance matrix
//
//   gamma_AB = [ gamma_A   sigma   ]
//              [ sigma^T   gamma_B ]
//
// together with det(gamma_AB) itself and per-quantity standard errors.
// det_sigma is optional because the local criterion works without it.
struct TwoModeDeterminants {
  double det_a = 1.0;
  double det_b = 1.0;
  double det_ab = 1.0;
  std::optional<double> det_sigma;
  double se_det_a = 0.0;
  double se_det_b = 0.0;
  double se_det_ab = 0.0;
  double se_det_sigma = 0.0;
};

// Three-way outcome of a statistical entanglement test. Detected and
// NotDetected require the margin to clear the threshold band; anything
// inside the band is Inconclusive.
enum class Verdict { Detected, NotDetected, Inconclusive };

struct CriterionResult {
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;     // positive favors entanglement
  double threshold = 0.0;  // sigma band plus any extra guard width
  bool detected() const { return verdict == Verdict::Detected; }
};

// Symplectic spectrum (zeta1 >= zeta2 > 0) of the partially transposed
// covariance matrix, from block determinants alone. Throws MissingSigma
// without det_sigma, NegativeDiscriminant if the biquadratic discriminant
// falls below -1e-9, NonpositiveRoot if the smaller root is not positive.
std::pair<double, double> symplectic_pt_spectrum(const TwoModeDeterminants& dets);

// Same spectrum with the discriminant clip widened to band_sigmas times its
// propagated standard error, for determinants carrying shot noise. A clipped
// discriminant collapses both roots to sqrt(D/2).
std::pair<double, double> symplectic_pt_spectrum_banded(const TwoModeDeterminants& dets,
                                                        double band_sigmas);

// max(0, -log2(zeta2)). Requires zeta2 > 0.
double log_negativity(double zeta2);

// Necessary-and-sufficient test: det_A + det_B - 2 det_sigma > 1 + det_AB.
// The margin is tested against band_sigmas propagated standard errors plus
// extra_band.
CriterionResult criterion_nec_suf(const TwoModeDeterminants& dets, double band_sigmas = 3.0,
                                  double extra_band = 0.0);

// Locally measurable sufficient test: det_A + det_B > 1 + det_AB. Misses
// some entangled states by design; det_sigma is not consulted.
CriterionResult criterion_local_sufficient(const TwoModeDeterminants& dets,
                                           double band_sigmas = 3.0, double extra_band = 0.0);
CriterionResult criterion_local_sufficient(double det_a, double det_b, double det_ab,
                                           double band_sigmas = 3.0, double extra_band = 0.0);

// det(sigma + sigma^T) from the three mixed-mode determinants: the plus and
// minus outputs of a balanced beam splitter on (A, B), and the determinant of
// (gamma_A + gamma_B)/2 measured by mixing mode A with a second copy's mode B.
double sigma_from_sums(double det_plus, double det_minus, double det_a_plus_b_half);

// Recovers det(sigma) and the symmetrizing phase from y_phi measured at
// phi = 0, pi/4, pi/2, where y_phi = det(sigma U(phi) + U(phi)^T sigma^T).
// phi_star is the maximizer of y_phi reported in [0, pi); exact ties report 0.
std::pair<double, double> sigma_det_from_phases(double y0, double y_quarter, double y_half);

// Delta-method standard error of the det(sigma) recovery above, treating the
// three y values as independent.
double sigma_det_standard_error(double y0, double y_quarter, double y_half, double se_y0,
                                double se_y_quarter, double se_y_half);

// Standard error of zeta2 propagated from the four determinant errors.
double zeta2_standard_error(const TwoModeDeterminants& dets);

// Momentum-sign flip on mode B of a two-mode covariance matrix. The result
// is typically unphysical for entangled inputs, so it stays a raw covariance.
CovarianceMatrix partial_transpose(const CovarianceMatrix& gamma);

// Block determinants read directly off a two-mode state, zero errors.
TwoModeDeterminants exact_two_mode_determinants(const GaussianState& state);

}  // namespace noclick
