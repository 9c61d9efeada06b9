#pragma once

#include <Eigen/Dense>
#include <vector>

#include "noclick/errors.hpp"

namespace noclick {

// Quadratures are ordered (x1, p1, x2, p2, ...) and scaled so that the
// vacuum covariance matrix is the identity. Half the literature uses
// gamma_vac = I/2; every formula in this library assumes gamma_vac = I.
using QuadratureVector = Eigen::VectorXd;

// States whose smallest symplectic eigenvalue is below 1 by more than
// this are rejected as unphysical.
inline constexpr double kPhysicalityTol = 1e-10;

// States within kPhysicalityTol of the boundary but dipping below it by
// more than this are accepted and flagged Marginal.
inline constexpr double kMarginalTol = 1e-12;

enum class Physicality { Physical, Marginal, Unphysical };

struct PhysicalityCertificate {
  Physicality status = Physicality::Unphysical;
  double min_symplectic_eigenvalue = 0.0;
  std::vector<double> symplectic_spectrum;  // one entry per mode, descending
};

// Block-diagonal symplectic form with 2x2 blocks [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int mode_count);

// Moduli of the eigenvalues of i*Omega*gamma. The 2N eigenvalues come in
// pairs of equal modulus; returns the N per-mode values, descending.
std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& gamma);

PhysicalityCertificate check_physicality(const Eigen::MatrixXd& gamma);

// 2N x 2N real symmetric second-moment matrix. Construction symmetrizes
// the input exactly and caches a physicality certificate; it does not
// reject unphysical matrices (make_state does).
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const Eigen::MatrixXd& entries);

  int mode_count() const { return mode_count_; }
  int dim() const { return 2 * mode_count_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const PhysicalityCertificate& certificate() const { return certificate_; }

  double operator()(int row, int col) const { return entries_(row, col); }

 private:
  Eigen::MatrixXd entries_;
  int mode_count_ = 0;
  PhysicalityCertificate certificate_;
};

// Immutable displacement + covariance pair. Constructing one implies the
// covariance passed the physicality check (Marginal is accepted).
class GaussianState {
 public:
  GaussianState(QuadratureVector displacement, CovarianceMatrix covariance);

  int mode_count() const { return covariance_.mode_count(); }
  int dim() const { return covariance_.dim(); }
  const QuadratureVector& displacement() const { return displacement_; }
  const CovarianceMatrix& covariance() const { return covariance_; }
  const Eigen::MatrixXd& gamma() const { return covariance_.entries(); }

 private:
  QuadratureVector displacement_;
  CovarianceMatrix covariance_;
};

GaussianState make_state(const QuadratureVector& xi, const CovarianceMatrix& gamma);
GaussianState make_state(const QuadratureVector& xi, const Eigen::MatrixXd& gamma);

std::vector<double> symplectic_spectrum(const CovarianceMatrix& gamma);

// Smallest eigenvalue of gamma: the minimal quadrature variance over all
// modes and phases.
double squeezing_variance(const CovarianceMatrix& gamma);

// det(gamma)^(-1/2), in (0, 1] for physical states.
double purity(const CovarianceMatrix& gamma);

// Wigner function at the phase-space point r, normalized to integrate
// to 1 over quadrature space.
double wigner(const GaussianState& state, const QuadratureVector& r);

// Husimi function at the phase-space point r. Normalized to integrate to
// 2^N over quadrature space, which is 1 per d^2alpha = dx dp / 2. The
// vacuum overlap of a state is pi^N * husimi_q(state, 0).
double husimi_q(const GaussianState& state, const QuadratureVector& r);

}  // namespace noclick
