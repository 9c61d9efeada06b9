#pragma once

#include <complex>

#include "noclick/state.hpp"

namespace noclick {

GaussianState vacuum(int mode_count);

// Single-mode thermal state with mean photon number nbar: gamma = (2*nbar+1)*I.
GaussianState thermal(double nbar);

// Single-mode squeezed vacuum. For theta = 0 the x quadrature variance is
// e^(-2r) and the p quadrature variance is e^(2r); theta rotates the
// squeezing axis.
GaussianState squeezed_vacuum(double r, double theta = 0.0);

// Coherent state: gamma = I, displacement (sqrt(2)*Re(alpha), sqrt(2)*Im(alpha)).
GaussianState coherent(std::complex<double> alpha);

// Two-mode squeezed vacuum: gamma_A = gamma_B = cosh(2r)*I and cross block
// sinh(2r)*diag(1,-1).
GaussianState two_mode_squeezed_vacuum(double r);

GaussianState tensor_product(const GaussianState& a, const GaussianState& b);

}  // namespace noclick
