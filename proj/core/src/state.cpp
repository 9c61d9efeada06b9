#include "noclick/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

namespace noclick {

namespace {

void validate_covariance_shape(const Eigen::MatrixXd& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() < 2 || gamma.rows() % 2 != 0) {
    throw DimensionMismatch("covariance matrix must be 2N x 2N with N >= 1, got " +
                            std::to_string(gamma.rows()) + " x " + std::to_string(gamma.cols()));
  }
  if (!gamma.allFinite()) {
    throw InvalidParameter("covariance matrix has non-finite entries");
  }
  double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  double asym = (gamma - gamma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw InvalidParameter("covariance matrix is not symmetric (max asymmetry " +
                           std::to_string(asym) + ")");
  }
}

}  // namespace

Eigen::MatrixXd symplectic_form(int mode_count) {
  if (mode_count < 1) {
    throw InvalidParameter("mode_count must be positive");
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * mode_count, 2 * mode_count);
  for (int m = 0; m < mode_count; m++) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& gamma) {
  validate_covariance_shape(gamma);
  int n = static_cast<int>(gamma.rows()) / 2;
  Eigen::MatrixXd k = symplectic_form(n) * gamma;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(k, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalue solver did not converge on Omega*gamma");
  }
  std::vector<double> moduli(2 * n);
  for (int i = 0; i < 2 * n; i++) {
    moduli[i] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  // Eigenvalues of Omega*gamma come in +/- pairs of equal modulus; keep one
  // representative per pair.
  std::vector<double> spectrum(n);
  for (int m = 0; m < n; m++) {
    spectrum[m] = moduli[2 * m];
  }
  return spectrum;
}

PhysicalityCertificate check_physicality(const Eigen::MatrixXd& gamma) {
  PhysicalityCertificate cert;
  cert.symplectic_spectrum = symplectic_spectrum(gamma);
  cert.min_symplectic_eigenvalue = cert.symplectic_spectrum.back();
  double nu = cert.min_symplectic_eigenvalue;
  if (nu >= 1.0 - kMarginalTol) {
    cert.status = Physicality::Physical;
  } else if (nu >= 1.0 - kPhysicalityTol) {
    cert.status = Physicality::Marginal;
  } else {
    cert.status = Physicality::Unphysical;
  }
  return cert;
}

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& entries) {
  validate_covariance_shape(entries);
  entries_ = 0.5 * (entries + entries.transpose());
  mode_count_ = static_cast<int>(entries_.rows()) / 2;
  certificate_ = check_physicality(entries_);
}

GaussianState::GaussianState(QuadratureVector displacement, CovarianceMatrix covariance)
    : displacement_(std::move(displacement)), covariance_(std::move(covariance)) {
  if (displacement_.size() != covariance_.dim()) {
    throw DimensionMismatch("displacement has " + std::to_string(displacement_.size()) +
                            " entries, covariance expects " + std::to_string(covariance_.dim()));
  }
  if (!displacement_.allFinite()) {
    throw InvalidParameter("displacement has non-finite entries");
  }
  if (covariance_.certificate().status == Physicality::Unphysical) {
    throw Unphysical("smallest symplectic eigenvalue " +
                     std::to_string(covariance_.certificate().min_symplectic_eigenvalue) +
                     " is below 1 - tol");
  }
}

GaussianState make_state(const QuadratureVector& xi, const CovarianceMatrix& gamma) {
  return GaussianState(xi, gamma);
}

GaussianState make_state(const QuadratureVector& xi, const Eigen::MatrixXd& gamma) {
  return GaussianState(xi, CovarianceMatrix(gamma));
}

std::vector<double> symplectic_spectrum(const CovarianceMatrix& gamma) {
  return gamma.certificate().symplectic_spectrum;
}

double squeezing_variance(const CovarianceMatrix& gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gamma.entries(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalue solver did not converge on gamma");
  }
  return solver.eigenvalues().minCoeff();
}

double purity(const CovarianceMatrix& gamma) {
  if (gamma.certificate().status == Physicality::Unphysical) {
    throw Unphysical("purity requires a physical covariance matrix");
  }
  double det = gamma.entries().determinant();
  if (!(det > 0.0)) {
    throw NumericalFailure("covariance determinant is not positive");
  }
  return 1.0 / std::sqrt(det);
}

double wigner(const GaussianState& state, const QuadratureVector& r) {
  if (r.size() != state.dim()) {
    throw DimensionMismatch("phase-space point has wrong dimension");
  }
  const Eigen::MatrixXd& gamma = state.gamma();
  double det = gamma.determinant();
  Eigen::VectorXd dr = r - state.displacement();
  double quad = dr.dot(gamma.ldlt().solve(dr));
  int n = state.mode_count();
  return std::pow(std::numbers::pi, -n) / std::sqrt(det) * std::exp(-quad);
}

double husimi_q(const GaussianState& state, const QuadratureVector& r) {
  if (r.size() != state.dim()) {
    throw DimensionMismatch("phase-space point has wrong dimension");
  }
  int n = state.mode_count();
  Eigen::MatrixXd widened = state.gamma() + Eigen::MatrixXd::Identity(state.dim(), state.dim());
  double det = widened.determinant();
  Eigen::VectorXd dr = r - state.displacement();
  double quad = dr.dot(widened.ldlt().solve(dr));
  return std::pow(2.0 / std::numbers::pi, n) / std::sqrt(det) * std::exp(-quad);
}

}  // namespace noclick
