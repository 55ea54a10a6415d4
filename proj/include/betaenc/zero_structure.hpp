#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "betaenc/quantizers.hpp"
#include "betaenc/recovery.hpp"

namespace betaenc {

// R(t) = sum_j s_j t^{3j}, s_j = +-1, the cofactor of (1 - t - t^2) in a
// period-3 zero expansion.
struct FactoredZeroPoly {
  std::vector<std::int8_t> r_coeffs;  // nonzero only at indices 0, 3, 6, ...
  std::size_t n_blocks = 0;
};

// Offset (0, 1 or 2) of the first complete 3-block from which every block
// reads (s, -s, -s); empty if no alignment with at least one complete block
// works.
std::optional<std::size_t> period3_alignment(std::span<const Bit> bits);
bool check_period3(std::span<const Bit> bits);

// Exact integer division of p by (1 - t - t^2). Throws StructureViolation
// unless the remainder is zero and the quotient has the sparse +-t^{3j} form.
FactoredZeroPoly factor_zero_poly(const TernaryPolynomial& p);

struct MagnitudeBound {
  double value = 0.0;  // |R(t)|
  double bound = 0.0;  // 1 - t^3 / (1 - t^3)
};

// |R(t)| against its lower bound for 0 <= t < 1/phi. Throws ParameterError
// outside the domain and StructureViolation if the bound fails.
MagnitudeBound rn_magnitude_bound(const FactoredZeroPoly& r, double t);

// |p'(1/phi)| for a factorable zero-expansion polynomial; asserts >= 1.545.
double derivative_bound_at_root(const TernaryPolynomial& p);

inline constexpr double kRootDerivativeFloor = 1.545;

}  // namespace betaenc
