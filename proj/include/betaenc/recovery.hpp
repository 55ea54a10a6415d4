#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "betaenc/constants.hpp"
#include "betaenc/quantizers.hpp"

namespace betaenc {

// Polynomial with coefficients in {-1, 0, +1} and constant term +-1
// (class B). Index 0 is the constant term.
class TernaryPolynomial {
 public:
  // Throws ParameterError if any coefficient is outside {-1, 0, 1} or the
  // constant term is 0 (or the sequence is empty).
  explicit TernaryPolynomial(std::vector<std::int8_t> coeffs);
  static TernaryPolynomial from_ints(std::span<const int> coeffs);
  // P(t) = b_1 + sum_{j>=1} b_{j+1} t^j built from a bitstream.
  static TernaryPolynomial from_bits(std::span<const Bit> bits);

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::span<const std::int8_t> coeffs() const noexcept { return coeffs_; }
  int operator[](std::size_t i) const noexcept { return coeffs_[i]; }

  // Keep the first n+1 coefficients (degree <= n).
  TernaryPolynomial truncated(std::size_t n) const;

  bool operator==(const TernaryPolynomial&) const = default;

 private:
  std::vector<std::int8_t> coeffs_;
};

struct PolyValue {
  double value = 0.0;
  double derivative = 0.0;
};

// p(t) and p'(t) by Horner's rule.
PolyValue poly_eval(const TernaryPolynomial& p, double t);

// A priori knowledge about the base: gamma in [gamma_low, gamma_high] with
// gamma_high <= 0.6491, and delta-transversality holding on [0, gamma_high].
struct TransversalityContext {
  std::optional<double> gamma_low;  // unset: accept residual <= phi^{-n}
  double gamma_high = kTransversalityLimit;
  double delta = kDeltaAt06491;

  double epsilon() const noexcept { return kTransversalityLimit - gamma_high; }
  void validate() const;

  // Delta from the two known anchors: 0.07 up to 0.63, else 0.00008.
  static TransversalityContext for_range(std::optional<double> gamma_low,
                                         double gamma_high);
};

struct RootSearchOptions {
  double newton_start = 0.618;
  int max_newton_steps = 10;
  double min_derivative = 1e-9;
  // Newton iterates and bracket scans stay inside [0, window_high].
  double window_high = kTransversalityLimit + 0.05;
  double scan_step = 1e-3;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;   // |p(root)|
  double tolerance = 0.0;  // max(requested tol, Horner rounding floor at root)
  int newton_steps = 0;
  bool used_bisection = false;
};

// First positive root of p in the search window with |p(root)| <= tol.
// Newton from options.newton_start; falls back to bisection on the first
// sign-change bracket. Throws NoRootError when nothing is accepted.
RootResult first_root(const TernaryPolynomial& p, const TransversalityContext& ctx,
                      double tol, const RootSearchOptions& options = {});

// Smallest N with gamma^{N+1} <= (1 - gamma) * epsilon * delta; empty when
// epsilon * delta <= 0 (never satisfied).
std::optional<std::size_t> required_bits(const TransversalityContext& ctx, double gamma);

enum class Guarantee { Proven, EmpiricalOnly };

struct RecoveryResult {
  double gamma_estimate = 0.0;
  std::size_t poly_degree_used = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t shift_k = 0;
  Guarantee guarantee = Guarantee::EmpiricalOnly;
};

struct DifferenceStream {
  TernaryPolynomial poly;
  std::size_t shift_k = 0;
};

// d_j = b_j + c_j, k = min{j : d_{j+1} != 0}, coefficients d_{j+k} / 2.
// Streams are truncated to the shorter length. Throws NoSignalError if
// d vanishes identically.
DifferenceStream difference_stream(std::span<const Bit> b, std::span<const Bit> c);

// Base recovery from a single expansion of 0.
RecoveryResult recover_gamma_from_zero(std::span<const Bit> bits,
                                       const TransversalityContext& ctx,
                                       const RootSearchOptions& options = {});

// Base recovery from expansions of x and -x. `max_degree`, when given,
// truncates the difference polynomial to that degree.
RecoveryResult recover_gamma_from_pair(std::span<const Bit> b, std::span<const Bit> c,
                                       const TransversalityContext& ctx,
                                       const RootSearchOptions& options = {},
                                       std::optional<std::size_t> max_degree = {});

struct MultiPairRecovery {
  RecoveryResult result;
  std::size_t pair_index = 0;
  // Shift k per pair tried; empty where the pair carried no signal.
  std::vector<std::optional<std::size_t>> shifts;
};

// Tries pairs in order and recovers from the first one with a finite shift.
MultiPairRecovery recover_gamma_from_pairs(
    std::span<const std::pair<std::vector<Bit>, std::vector<Bit>>> pairs,
    const TransversalityContext& ctx, const RootSearchOptions& options = {});

// Roots of p on (0, rho] located by a sign-change scan at `step` and
// refined by bisection.
std::vector<double> sign_change_roots(const TernaryPolynomial& p, double rho,
                                      double step = 1e-4);

struct TransversalityViolation {
  std::vector<std::int8_t> coeffs;
  std::vector<double> roots;
};

struct TransversalityReport {
  std::size_t max_degree = 0;
  double rho = 0.0;
  std::uint64_t instances = 0;  // 2 * 3^max_degree
  std::vector<TransversalityViolation> violations;
};

// Exhaustive scan of class-B polynomials of degree <= max_degree for two or
// more roots on (0, rho], at grid resolution 1e-4. max_degree <= 14.
TransversalityReport transversality_oracle(std::size_t max_degree, double rho);

}  // namespace betaenc
