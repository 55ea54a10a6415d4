#include "betaenc/decoder.hpp"

#include <cmath>
#include <limits>

#include "betaenc/errors.hpp"

namespace betaenc {

namespace {

void require_unit_base(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ParameterError("base gamma must lie in (0, 1)");
  }
}

}  // namespace

double partial_sum(std::span<const Bit> bits, double gamma, std::size_t n) {
  require_unit_base(gamma);
  if (n > bits.size()) throw ParameterError("requested more bits than available");
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc = gamma * (bits[j].value() + acc);
  }
  return acc;
}

double error_bound(double gamma, std::size_t n) {
  require_unit_base(gamma);
  return std::pow(gamma, static_cast<double>(n) + 1.0) / (1.0 - gamma);
}

ReconstructionReport decode_with_estimate(std::span<const Bit> bits, double gamma_tilde,
                                          std::size_t n, double gamma_uncertainty) {
  if (!(gamma_uncertainty >= 0.0)) {
    throw ParameterError("gamma uncertainty must be non-negative");
  }
  ReconstructionReport report;
  report.estimate = partial_sum(bits, gamma_tilde, n);
  report.bits_used = n;
  report.base_used = gamma_tilde;
  if (gamma_uncertainty == 0.0) {
    report.bound = error_bound(gamma_tilde, n);
    return report;
  }
  const double g = gamma_tilde + gamma_uncertainty;
  if (!(g < 1.0)) {
    report.bound = std::numeric_limits<double>::infinity();
    return report;
  }
  // sum_{j=1}^{n} j g^{j-1}, by Horner on the coefficients j.
  double slope = 0.0;
  for (std::size_t j = n; j >= 1; --j) slope = slope * g + static_cast<double>(j);
  report.bound = error_bound(g, n) + gamma_uncertainty * slope;
  return report;
}

}  // namespace betaenc
