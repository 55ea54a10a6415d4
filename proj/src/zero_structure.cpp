#include "betaenc/zero_structure.hpp"

#include <cmath>
#include <string>

#include "betaenc/constants.hpp"
#include "betaenc/errors.hpp"

namespace betaenc {

std::optional<std::size_t> period3_alignment(std::span<const Bit> bits) {
  for (std::size_t offset = 0; offset < 3; ++offset) {
    bool any_block = false;
    bool ok = true;
    for (std::size_t i = offset; i + 3 <= bits.size(); i += 3) {
      any_block = true;
      const int s = bits[i].value();
      if (bits[i + 1].value() != -s || bits[i + 2].value() != -s) {
        ok = false;
        break;
      }
    }
    if (any_block && ok) return offset;
  }
  return std::nullopt;
}

bool check_period3(std::span<const Bit> bits) { return period3_alignment(bits).has_value(); }

FactoredZeroPoly factor_zero_poly(const TernaryPolynomial& p) {
  const std::size_t deg = p.degree();
  if (deg % 3 != 2) {
    throw StructureViolation("zero-expansion polynomial degree " + std::to_string(deg) +
                             " is not 2 mod 3");
  }
  // Long division from the top by D(t) = 1 - t - t^2 (leading coefficient -1).
  std::vector<long long> rem(p.coeffs().begin(), p.coeffs().end());
  std::vector<std::int8_t> quotient(deg - 1, 0);
  for (std::size_t i = deg; i >= 2; --i) {
    const long long q = -rem[i];
    if (q < -1 || q > 1) {
      throw StructureViolation("quotient coefficient " + std::to_string(q) + " at t^" +
                               std::to_string(i - 2) + " is not in {-1, 0, 1}");
    }
    quotient[i - 2] = static_cast<std::int8_t>(q);
    rem[i] += q;       // - q * (-1)
    rem[i - 1] += q;   // - q * (-1)
    rem[i - 2] -= q;   // - q * (+1)
  }
  if (rem[0] != 0 || rem[1] != 0) {
    throw StructureViolation("division by (1 - t - t^2) leaves remainder " +
                             std::to_string(rem[0]) + " + " + std::to_string(rem[1]) + " t");
  }
  for (std::size_t i = 0; i < quotient.size(); ++i) {
    const bool block_start = i % 3 == 0;
    if (block_start ? quotient[i] == 0 : quotient[i] != 0) {
      throw StructureViolation("quotient is not of the form sum +-t^{3j} (index " +
                               std::to_string(i) + ")");
    }
  }
  FactoredZeroPoly out;
  out.n_blocks = (quotient.size() + 2) / 3;
  out.r_coeffs = std::move(quotient);
  return out;
}

namespace {

double eval_r(const FactoredZeroPoly& r, double t) {
  double acc = 0.0;
  for (std::size_t i = r.r_coeffs.size(); i-- > 0;) acc = acc * t + r.r_coeffs[i];
  return acc;
}

}  // namespace

MagnitudeBound rn_magnitude_bound(const FactoredZeroPoly& r, double t) {
  if (!(t >= 0.0 && t < kInvPhi)) {
    throw ParameterError("t must lie in [0, 1/phi)");
  }
  const double t3 = t * t * t;
  MagnitudeBound out{std::abs(eval_r(r, t)), 1.0 - t3 / (1.0 - t3)};
  if (out.value < out.bound - 1e-12) {
    throw StructureViolation("|R(t)| fell below 1 - t^3/(1 - t^3) at t = " + std::to_string(t));
  }
  return out;
}

double derivative_bound_at_root(const TernaryPolynomial& p) {
  factor_zero_poly(p);
  const double d = std::abs(poly_eval(p, kInvPhi).derivative);
  if (d < kRootDerivativeFloor) {
    throw StructureViolation("|P'(1/phi)| = " + std::to_string(d) + " below 1.545");
  }
  return d;
}

}  // namespace betaenc
