#pragma once

#include "noclick/state.hpp"

namespace noclick {

struct FockOracleResult {
  double value = 0.0;
  // Absolute change between the last two quadrature refinements.
  double quadrature_delta = 0.0;
  // Upper bound on the integrand mass outside the integration box.
  double tail_bound = 0.0;
  int nodes_per_axis = 0;
  int refinements = 0;
};

// Vacuum-matrix-element oracle: computes <0...0|rho|0...0> by tensor
// Gauss-Legendre quadrature of the state's phase-space function against the
// vacuum overlap kernel, on the box [-R, R]^(2N) with R = sqrt(2*cutoff).
// Shares only the state convention with the closed-form no-click
// probability, so it validates that formula independently.
FockOracleResult fock_no_click_oracle_detailed(const GaussianState& state, int cutoff);

double fock_no_click_oracle(const GaussianState& state, int cutoff);

}  // namespace noclick
