#pragma once

#include <cstddef>
#include <vector>

#include "betaenc/quantizers.hpp"

namespace betaenc {

// Leak factors of the two GRE delay elements, each in (0, 1].
struct LeakParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  void validate() const;
  bool operator==(const LeakParams&) const = default;
};

// Bits b_1..b_N and the state trace u_0..u_{N+1} that produced them.
struct EncodeResult {
  std::vector<Bit> bits;
  std::vector<double> states;
  double effective_gamma = 0.0;
};

struct EncodeOptions {
  // |u_n| above this aborts the run with DivergenceError.
  double state_ceiling = 100.0;
};

// Beta-encoder: u_1 = beta x, b_j = Q(u_j), u_{j+1} = beta (u_j - b_j).
// With nu == 0 the sign quantizer is used (Q(0) = -1); otherwise the flaky
// quantizer with spec.policy. x in [-1, 1], beta in (1, 2].
EncodeResult beta_encode(double x, double beta, std::size_t n_bits,
                         const QuantizerSpec& q, const EncodeOptions& opts = {});

// Leaky beta-encoder: u_1 = x, u_{j+1} = lambda beta (u_j - b_j). The bits
// expand x as sum_{i>=0} b_{i+1} gamma^i with gamma = 1 / (lambda beta).
// Requires lambda beta > 1. With lambda = 1 this reproduces
// beta_encode(x / beta, beta, ...) bit for bit when x = beta * x'.
EncodeResult beta_encode_leaky(double x, double beta, double lambda,
                               std::size_t n_bits, const QuantizerSpec& q,
                               const EncodeOptions& opts = {});

// Golden ratio encoder: u_0 = 0, u_1 = x, b_{n+1} = Q_alpha(u_n, u_{n+1}),
// u_{n+1} = u_n + u_{n-1} - b_n.
EncodeResult gre_encode(double x, std::size_t n_bits, const QuantizerSpec& q,
                        const EncodeOptions& opts = {});

// Leaky GRE: u_{n+1} = lambda1 u_n + lambda1 lambda2 u_{n-1} - b_n with
// b_{n+1} = Q_alpha(u_n, u_{n+1}), i.e. the iteration of the piecewise
// affine map T(u, v) = (v, lambda1 lambda2 u + lambda1 v - Q(u, v)).
EncodeResult gre_encode_leaky(double x, const LeakParams& leak, std::size_t n_bits,
                              const QuantizerSpec& q, const EncodeOptions& opts = {});

// Positive root of lambda1 lambda2 g^2 + lambda1 g - 1 = 0.
double effective_gamma(double lambda1, double lambda2);
inline double effective_gamma(const LeakParams& leak) {
  return effective_gamma(leak.lambda1, leak.lambda2);
}

// Equal leak factors lambda1 = lambda2 = (1/phi) / gamma realising gamma.
// gamma must be >= 1/phi.
LeakParams leak_for_gamma(double gamma);

}  // namespace betaenc
