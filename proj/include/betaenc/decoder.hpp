#pragma once

#include <cstddef>
#include <span>

#include "betaenc/quantizers.hpp"

namespace betaenc {

struct ReconstructionReport {
  double estimate = 0.0;
  std::size_t bits_used = 0;
  double base_used = 0.0;
  double bound = 0.0;
};

// sum_{j=1}^{n} b_j gamma^j by Horner's rule. gamma in (0, 1), n <= bits.size().
double partial_sum(std::span<const Bit> bits, double gamma, std::size_t n);

// gamma^{N+1} / (1 - gamma): tail bound for a bounded-state encoder.
double error_bound(double gamma, std::size_t n);

// Reconstruct with an estimated base. `gamma_uncertainty` is a known bound on
// |gamma - gamma_tilde|; with it the reported bound becomes
//   error_bound(g, n) + uncertainty * sum_{j=1}^{n} j g^{j-1},  g = gamma_tilde + uncertainty,
// which covers both the truncated tail and the base perturbation. With zero
// uncertainty it reduces to error_bound(gamma_tilde, n).
ReconstructionReport decode_with_estimate(std::span<const Bit> bits, double gamma_tilde,
                                          std::size_t n, double gamma_uncertainty = 0.0);

}  // namespace betaenc
