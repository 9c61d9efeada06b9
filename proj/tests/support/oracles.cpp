#include "support/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace noclick::testing {

double standard_normal(PhiloxStream& rng) {
  // 1 - u keeps the argument of log strictly positive.
  double u1 = 1.0 - rng.next_double();
  double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Permutation from block (x1..xN, p1..pN) ordering to the interleaved
// ordering the library uses.
Eigen::MatrixXd interleaving_permutation(int modes) {
  int dim = 2 * modes;
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < modes; m++) {
    perm(2 * m, m) = 1.0;
    perm(2 * m + 1, modes + m) = 1.0;
  }
  return perm;
}

// Haar-distributed unitary as a quadrature rotation in block ordering:
// U = X + iY acts on mode operators, so quadratures transform by
// [[X, -Y], [Y, X]].
Eigen::MatrixXd random_passive_block(PhiloxStream& rng, int modes) {
  Eigen::MatrixXcd ginibre(modes, modes);
  for (int r = 0; r < modes; r++) {
    for (int c = 0; c < modes; c++) {
      ginibre(r, c) = std::complex<double>(standard_normal(rng), standard_normal(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r_factor = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of R's diagonal makes the distribution Haar.
  for (int c = 0; c < modes; c++) {
    std::complex<double> d = r_factor(c, c);
    q.col(c) *= std::abs(d) > 0.0 ? d / std::abs(d) : 1.0;
  }
  Eigen::MatrixXd out(2 * modes, 2 * modes);
  out.topLeftCorner(modes, modes) = q.real();
  out.topRightCorner(modes, modes) = -q.imag();
  out.bottomLeftCorner(modes, modes) = q.imag();
  out.bottomRightCorner(modes, modes) = q.real();
  return out;
}

}  // namespace

Eigen::MatrixXd random_passive(PhiloxStream& rng, int modes) {
  Eigen::MatrixXd perm = interleaving_permutation(modes);
  return perm * random_passive_block(rng, modes) * perm.transpose();
}

Eigen::MatrixXd random_symplectic(PhiloxStream& rng, int modes, double max_squeeze) {
  Eigen::MatrixXd left = random_passive_block(rng, modes);
  Eigen::MatrixXd right = random_passive_block(rng, modes);
  Eigen::VectorXd squeeze(2 * modes);
  for (int m = 0; m < modes; m++) {
    double s = max_squeeze * (2.0 * rng.next_double() - 1.0);
    squeeze(m) = std::exp(s);
    squeeze(modes + m) = std::exp(-s);
  }
  Eigen::MatrixXd perm = interleaving_permutation(modes);
  return perm * (left * squeeze.asDiagonal() * right) * perm.transpose();
}

Eigen::MatrixXd random_physical_covariance(PhiloxStream& rng, int modes, double max_squeeze,
                                           double max_thermal) {
  Eigen::MatrixXd s = random_symplectic(rng, modes, max_squeeze);
  Eigen::VectorXd nu(2 * modes);
  for (int m = 0; m < modes; m++) {
    double v = 1.0 + max_thermal * rng.next_double();
    nu(2 * m) = v;
    nu(2 * m + 1) = v;
  }
  Eigen::MatrixXd gamma = s * nu.asDiagonal() * s.transpose();
  return 0.5 * (gamma + gamma.transpose());
}

std::vector<double> elementary_symmetric_oracle(const Eigen::MatrixXd& a) {
  int n = static_cast<int>(a.rows());
  std::vector<double> e(static_cast<std::size_t>(n));
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; k++) {
    Eigen::MatrixXd am = a * m;
    double c = -am.trace() / k;
    e[static_cast<std::size_t>(k - 1)] = (k % 2 == 0) ? c : -c;
    m = am + c * Eigen::MatrixXd::Identity(n, n);
  }
  return e;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  return solver.eigenvalues().minCoeff();
}

}  // namespace noclick::testing
