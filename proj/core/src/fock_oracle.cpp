#include "noclick/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace noclick {

namespace {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes from Newton iteration on the Legendre recurrence.
GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; k++) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; iter++) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; j++) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::fabs(step) < 1e-15) {
        break;
      }
    }
    rule.nodes[n - 1 - k] = x;
    rule.weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Integrates 2^N * W(r) * exp(-r.r) over [-half_width, half_width]^dim with
// an n-point tensor Gauss-Legendre rule.
double integrate_overlap(const Eigen::VectorXd& xi, const Eigen::MatrixXd& gamma_inv,
                         double norm_const, double half_width, int dim, int n) {
  GaussLegendreRule rule = gauss_legendre(n);
  for (int k = 0; k < n; k++) {
    rule.nodes[k] *= half_width;
    rule.weights[k] *= half_width;
  }
  std::vector<int> index(dim, 0);
  double r[8];
  double dr[8];
  for (int d = 0; d < dim; d++) {
    r[d] = rule.nodes[0];
  }
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    double expo = 0.0;
    for (int d = 0; d < dim; d++) {
      weight *= rule.weights[index[d]];
      dr[d] = r[d] - xi(d);
      expo += r[d] * r[d];
    }
    for (int i = 0; i < dim; i++) {
      double row = 0.0;
      for (int j = 0; j < dim; j++) {
        row += gamma_inv(i, j) * dr[j];
      }
      expo += dr[i] * row;
    }
    total += weight * std::exp(-expo);

    int d = 0;
    while (d < dim) {
      if (++index[d] < n) {
        r[d] = rule.nodes[index[d]];
        break;
      }
      index[d] = 0;
      r[d] = rule.nodes[0];
      d++;
    }
    if (d == dim) {
      break;
    }
  }
  return norm_const * total;
}

}  // namespace

FockOracleResult fock_no_click_oracle_detailed(const GaussianState& state, int cutoff) {
  if (cutoff < 20) {
    throw InvalidParameter("cutoff must be at least 20");
  }
  int n_modes = state.mode_count();
  if (n_modes > 2) {
    throw InvalidParameter("the quadrature oracle supports at most 2 modes");
  }
  int dim = state.dim();
  double half_width = std::sqrt(2.0 * cutoff);

  const Eigen::MatrixXd& gamma = state.gamma();
  Eigen::MatrixXd gamma_inv = gamma.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));

  // The integrand is a Gaussian with precision gamma_inv + I; bound its mass
  // outside the box by the per-coordinate marginal tails.
  Eigen::MatrixXd precision = gamma_inv + Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd integrand_cov = precision.ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));
  Eigen::VectorXd center = integrand_cov * (gamma_inv * state.displacement());
  double tail = 0.0;
  for (int d = 0; d < dim; d++) {
    double spread = std::sqrt(integrand_cov(d, d));
    tail += 0.5 * std::erfc((half_width - center(d)) / spread);
    tail += 0.5 * std::erfc((half_width + center(d)) / spread);
  }
  if (tail > 1e-9) {
    throw CutoffTooSmall("estimated integrand mass outside the integration box is " +
                         std::to_string(tail));
  }

  double det = gamma.determinant();
  double norm_const =
      std::pow(2.0 / std::numbers::pi, n_modes) / std::sqrt(det);

  int max_nodes = dim <= 2 ? 768 : 128;
  FockOracleResult result;
  result.tail_bound = tail;
  int n = 16;
  double previous = integrate_overlap(state.displacement(), gamma_inv, norm_const, half_width,
                                      dim, n);
  while (true) {
    int next = static_cast<int>(std::ceil(1.5 * n));
    if (next > max_nodes) {
      throw NumericalFailure("quadrature did not converge within the node budget");
    }
    double refined = integrate_overlap(state.displacement(), gamma_inv, norm_const, half_width,
                                       dim, next);
    result.refinements++;
    result.quadrature_delta = std::fabs(refined - previous);
    n = next;
    if (result.quadrature_delta <= 1e-10 * std::max(1.0, std::fabs(refined))) {
      result.value = refined;
      result.nodes_per_axis = n;
      break;
    }
    previous = refined;
  }
  return result;
}

double fock_no_click_oracle(const GaussianState& state, int cutoff) {
  return fock_no_click_oracle_detailed(state, cutoff).value;
}

}  // namespace noclick
