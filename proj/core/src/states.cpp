#include "noclick/states.hpp"

#include <cmath>
#include <numbers>

namespace noclick {

GaussianState vacuum(int mode_count) {
  if (mode_count < 1) {
    throw InvalidParameter("mode_count must be positive");
  }
  return make_state(Eigen::VectorXd::Zero(2 * mode_count),
                    Eigen::MatrixXd::Identity(2 * mode_count, 2 * mode_count));
}

GaussianState thermal(double nbar) {
  if (!(nbar >= 0.0)) {
    throw InvalidParameter("mean photon number must be non-negative");
  }
  return make_state(Eigen::VectorXd::Zero(2),
                    (2.0 * nbar + 1.0) * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState squeezed_vacuum(double r, double theta) {
  if (!std::isfinite(r) || !std::isfinite(theta)) {
    throw InvalidParameter("squeezing parameters must be finite");
  }
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::Matrix2d diag = Eigen::Vector2d(std::exp(-2.0 * r), std::exp(2.0 * r)).asDiagonal();
  return make_state(Eigen::VectorXd::Zero(2), rot * diag * rot.transpose());
}

GaussianState coherent(std::complex<double> alpha) {
  Eigen::VectorXd xi(2);
  xi << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
  return make_state(xi, Eigen::MatrixXd::Identity(2, 2));
}

GaussianState two_mode_squeezed_vacuum(double r) {
  if (!std::isfinite(r)) {
    throw InvalidParameter("squeezing parameter must be finite");
  }
  double ch = std::cosh(2.0 * r);
  double sh = std::sinh(2.0 * r);
  Eigen::MatrixXd gamma = ch * Eigen::MatrixXd::Identity(4, 4);
  gamma(0, 2) = gamma(2, 0) = sh;
  gamma(1, 3) = gamma(3, 1) = -sh;
  return make_state(Eigen::VectorXd::Zero(4), gamma);
}

GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  int da = a.dim();
  int db = b.dim();
  Eigen::VectorXd xi(da + db);
  xi << a.displacement(), b.displacement();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(da + db, da + db);
  gamma.topLeftCorner(da, da) = a.gamma();
  gamma.bottomRightCorner(db, db) = b.gamma();
  return make_state(xi, gamma);
}

}  // namespace noclick
