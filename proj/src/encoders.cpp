#include "betaenc/encoders.hpp"

#include <cmath>
#include <string>

#include "betaenc/constants.hpp"
#include "betaenc/errors.hpp"

namespace betaenc {

namespace {

Bit scalar_quantize(double u, const QuantizerSpec& q, PolicyState& state) {
  return q.nu == 0.0 ? q_ideal(u) : q_flaky(u, q, state);
}

void check_ceiling(double u, std::size_t step, const EncodeOptions& opts) {
  if (!(std::abs(u) <= opts.state_ceiling)) {
    throw DivergenceError("encoder state |u_" + std::to_string(step) + "| = " +
                              std::to_string(u) + " exceeds ceiling " +
                              std::to_string(opts.state_ceiling) +
                              "; parameters are not certified",
                          step, u);
  }
}

// u_{j+1} = scale (u_j - b_j) from a given u_1.
EncodeResult run_beta_recursion(double u1, double scale, std::size_t n_bits,
                                const QuantizerSpec& q, const EncodeOptions& opts) {
  PolicyState state(q.policy);
  EncodeResult out;
  out.bits.reserve(n_bits);
  out.states.reserve(n_bits + 2);
  out.states.push_back(0.0);
  out.states.push_back(u1);
  check_ceiling(u1, 1, opts);
  double u = u1;
  for (std::size_t j = 1; j <= n_bits; ++j) {
    const Bit b = scalar_quantize(u, q, state);
    out.bits.push_back(b);
    u = scale * (u - b.value());
    check_ceiling(u, j + 1, opts);
    out.states.push_back(u);
  }
  out.effective_gamma = 1.0 / scale;
  return out;
}

}  // namespace

void LeakParams::validate() const {
  auto ok = [](double l) { return std::isfinite(l) && l > 0.0 && l <= 1.0; };
  if (!ok(lambda1) || !ok(lambda2)) {
    throw ParameterError("leak factors must lie in (0, 1]");
  }
}

EncodeResult beta_encode(double x, double beta, std::size_t n_bits,
                         const QuantizerSpec& q, const EncodeOptions& opts) {
  if (!(beta > 1.0 && beta <= 2.0)) {
    throw ParameterError("beta must lie in (1, 2]");
  }
  if (!(x >= -1.0 && x <= 1.0)) throw ParameterError("x must lie in [-1, 1]");
  q.validate();
  return run_beta_recursion(beta * x, beta, n_bits, q, opts);
}

EncodeResult beta_encode_leaky(double x, double beta, double lambda,
                               std::size_t n_bits, const QuantizerSpec& q,
                               const EncodeOptions& opts) {
  if (!(beta > 1.0 && beta <= 2.0)) {
    throw ParameterError("beta must lie in (1, 2]");
  }
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ParameterError("leak factor lambda must lie in (0, 1]");
  }
  if (!(lambda * beta > 1.0)) {
    throw ParameterError("lambda * beta must exceed 1 for the expansion to converge");
  }
  if (!std::isfinite(x)) throw ParameterError("x must be finite");
  q.validate();
  return run_beta_recursion(x, lambda * beta, n_bits, q, opts);
}

EncodeResult gre_encode(double x, std::size_t n_bits, const QuantizerSpec& q,
                        const EncodeOptions& opts) {
  EncodeResult out = gre_encode_leaky(x, LeakParams{1.0, 1.0}, n_bits, q, opts);
  out.effective_gamma = kInvPhi;
  return out;
}

EncodeResult gre_encode_leaky(double x, const LeakParams& leak, std::size_t n_bits,
                              const QuantizerSpec& q, const EncodeOptions& opts) {
  leak.validate();
  q.validate();
  if (!(x >= -1.0 && x <= 1.0)) throw ParameterError("x must lie in [-1, 1]");

  const double l1 = leak.lambda1;
  const double l12 = leak.lambda1 * leak.lambda2;
  PolicyState state(q.policy);

  EncodeResult out;
  out.bits.reserve(n_bits);
  out.states.reserve(n_bits + 2);
  out.states.push_back(0.0);
  out.states.push_back(x);

  double prev = 0.0;  // u_{n-1}
  double cur = x;     // u_n
  for (std::size_t n = 1; n <= n_bits; ++n) {
    const Bit b = q2_flaky(prev, cur, q, state);  // b_n = Q(u_{n-1}, u_n)
    out.bits.push_back(b);
    const double next = l1 * cur + l12 * prev - b.value();
    check_ceiling(next, n + 1, opts);
    out.states.push_back(next);
    prev = cur;
    cur = next;
  }
  out.effective_gamma = effective_gamma(leak);
  return out;
}

double effective_gamma(double lambda1, double lambda2) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0) || !std::isfinite(lambda1) ||
      !std::isfinite(lambda2)) {
    throw ParameterError("leak factors must be positive");
  }
  // Rationalised form of (-l1 + sqrt(l1^2 + 4 l1 l2)) / (2 l1 l2).
  return 2.0 / (lambda1 + std::sqrt(lambda1 * lambda1 + 4.0 * lambda1 * lambda2));
}

LeakParams leak_for_gamma(double gamma) {
  if (!(gamma >= kInvPhi) || !std::isfinite(gamma)) {
    throw ParameterError("gamma below 1/phi would need a leak factor above 1");
  }
  const double lambda = kInvPhi / gamma;
  return LeakParams{lambda, lambda};
}

}  // namespace betaenc
