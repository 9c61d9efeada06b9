#pragma once

#include <string>
#include <utility>
#include <vector>

#include "noclick/detection.hpp"

namespace noclick {

struct SingleModeEstimate {
  double tr_gamma = 0.0;
  double det_gamma = 0.0;
  double lambda = 0.0;
  double purity = 0.0;
  double se_tr_gamma = 0.0;
  double se_det_gamma = 0.0;
  double se_lambda = 0.0;
  double se_purity = 0.0;
  // True when det >= 1 and tr >= 2 within 3 standard errors. Raw estimates
  // are never projected onto the physical set; callers decide what to do
  // with borderline values.
  bool physical = false;
  double distance_to_physical = 0.0;
  // Set when a P-hat = 1 row fell back to a Wilson interval for its
  // variance estimate.
  bool wilson_fallback = false;
  // Labels of P-hat = 0 rows, which cannot be inverted and were dropped.
  std::vector<std::string> dropped_rows;
};

// Coefficients f_1 ... f_2N of the covariance characteristic polynomial,
// with f_1 = Tr(gamma) and f_2N = det(gamma).
struct CharPolyCoefficients {
  std::vector<double> f;
  int mode_count = 0;
};

struct MultimodeSolution {
  CharPolyCoefficients coefficients;
  double condition_number = 0.0;
};

struct MultimodeEstimate {
  CharPolyCoefficients f;
  std::vector<double> se_f;
  double lambda = 0.0;
  double se_lambda = 0.0;
  double purity = 0.0;
  double se_purity = 0.0;
  double condition_number = 0.0;
  bool physical = false;
  double distance_to_physical = 0.0;
  bool wilson_fallback = false;
  std::vector<std::string> dropped_rows;
};

// Two-transmittance inversion of the no-click probabilities of a
// zero-displacement single-mode state. Returns (Tr gamma, det gamma), raw.
std::pair<double, double> invert_single_mode(double p1, double t1, double p2, double t2);

// Smaller covariance eigenvalue from the invariants:
// lambda = (Tr - sqrt(Tr^2 - 4 det)) / 2. Discriminants within 1e-9 below
// zero are clipped; worse signals inconsistent inputs.
double lambda_single_mode(double tr_gamma, double det_gamma);

// Solves the linear system relating 2^2N / P_j^2 to the characteristic
// polynomial coefficients, one row per transmittance. Exact solve when the
// system is square, otherwise (weighted) least squares. Weights, when
// given, should be inverse variances of the right-hand side.
MultimodeSolution solve_multimode(const std::vector<double>& p, const std::vector<double>& t,
                                  int mode_count, const std::vector<double>& weights = {});

// Smallest real root of the characteristic polynomial built from f, via
// companion-matrix eigenvalues.
double lambda_multimode(const CharPolyCoefficients& coefficients);

double purity_from_det(double det_gamma);

// Tally-driven estimation with delta-method standard errors. Rows with
// P-hat = 0 are dropped; effective transmittances fold in the recorded
// efficiency.
SingleModeEstimate estimate_single_mode(const TallyTable& tally);
MultimodeEstimate estimate_multimode(const TallyTable& tally, int mode_count);

// Infinite-statistics variants fed with exact probabilities; all standard
// errors are zero.
SingleModeEstimate estimate_single_mode_exact(const std::vector<double>& p,
                                              const std::vector<double>& t_eff);
MultimodeEstimate estimate_multimode_exact(const std::vector<double>& p,
                                           const std::vector<double>& t_eff, int mode_count);

}  // namespace noclick
