#pragma once

#include <vector>

#include "noclick/state.hpp"

namespace noclick {

// Mixes two modes on a beam splitter of transmittance T. Convention:
//   out_a =  sqrt(T) * in_a + sqrt(1-T) * in_b
//   out_b = -sqrt(1-T) * in_a + sqrt(T) * in_b
GaussianState apply_beam_splitter(const GaussianState& state, int mode_a, int mode_b, double t);

// Rotates one mode's quadrature plane. With U(phi) = [[cos, sin], [-sin, cos]],
// shifting mode B of a two-mode state maps the cross block sigma_AB to
// sigma_AB * U(phi).
GaussianState apply_phase_shift(const GaussianState& state, int mode, double phi);

// Pure loss of transmissivity eta on one mode: a beam splitter of
// transmittance eta against a vacuum ancilla that is then traced out.
GaussianState apply_loss(const GaussianState& state, int mode, double eta);

// Keeps the listed modes (in the order given) and traces out the rest.
GaussianState reduce(const GaussianState& state, const std::vector<int>& modes);

}  // namespace noclick
