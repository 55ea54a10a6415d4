#include "betaenc/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "betaenc/errors.hpp"

namespace betaenc {

// ---------------------------------------------------------------------------
// TernaryPolynomial

TernaryPolynomial::TernaryPolynomial(std::vector<std::int8_t> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ParameterError("ternary polynomial needs a constant term");
  if (coeffs_[0] != 1 && coeffs_[0] != -1) {
    throw ParameterError("ternary polynomial constant term must be +1 or -1");
  }
  for (std::int8_t c : coeffs_) {
    if (c < -1 || c > 1) throw ParameterError("ternary coefficients must be in {-1, 0, 1}");
  }
}

TernaryPolynomial TernaryPolynomial::from_ints(std::span<const int> coeffs) {
  std::vector<std::int8_t> c;
  c.reserve(coeffs.size());
  for (int v : coeffs) {
    if (v < -1 || v > 1) throw ParameterError("ternary coefficients must be in {-1, 0, 1}");
    c.push_back(static_cast<std::int8_t>(v));
  }
  return TernaryPolynomial(std::move(c));
}

TernaryPolynomial TernaryPolynomial::from_bits(std::span<const Bit> bits) {
  std::vector<std::int8_t> c;
  c.reserve(bits.size());
  for (Bit b : bits) c.push_back(static_cast<std::int8_t>(b.value()));
  return TernaryPolynomial(std::move(c));
}

TernaryPolynomial TernaryPolynomial::truncated(std::size_t n) const {
  if (n + 1 >= coeffs_.size()) return *this;
  return TernaryPolynomial(std::vector<std::int8_t>(coeffs_.begin(), coeffs_.begin() + n + 1));
}

PolyValue poly_eval(const TernaryPolynomial& p, double t) {
  const auto c = p.coeffs();
  double value = c.back();
  double derivative = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    derivative = derivative * t + value;
    value = value * t + c[i];
  }
  return {value, derivative};
}

// ---------------------------------------------------------------------------
// Context

void TransversalityContext::validate() const {
  if (!(gamma_high > 0.0 && gamma_high <= kTransversalityLimit)) {
    throw ParameterError("gamma_high must lie in (0, 0.6491]");
  }
  if (gamma_low && !(*gamma_low > 0.0 && *gamma_low <= gamma_high)) {
    throw ParameterError("gamma_low must lie in (0, gamma_high]");
  }
  if (!(delta > 0.0)) throw ParameterError("transversality delta must be positive");
}

TransversalityContext TransversalityContext::for_range(std::optional<double> gamma_low,
                                                       double gamma_high) {
  TransversalityContext ctx;
  ctx.gamma_high = std::min(gamma_high, kTransversalityLimit);
  if (gamma_low) ctx.gamma_low = std::min(*gamma_low, ctx.gamma_high);
  ctx.delta = ctx.gamma_high <= 0.63 ? kDeltaAt063 : kDeltaAt06491;
  ctx.validate();
  return ctx;
}

// ---------------------------------------------------------------------------
// Root search

namespace {

// Running-error bound for Horner evaluation at t >= 0.
double rounding_floor(const TernaryPolynomial& p, double t) {
  const auto c = p.coeffs();
  double abs_sum = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) abs_sum = abs_sum * t + std::abs(c[i]);
  const double u = std::numeric_limits<double>::epsilon() / 2.0;
  return 2.0 * static_cast<double>(c.size()) * u * abs_sum;
}

struct Bracket {
  double lo;
  double hi;
};

// First grid cell [t_{k-1}, t_k] in [lo, hi] across which p changes sign.
std::optional<Bracket> first_bracket(const TernaryPolynomial& p, double lo, double hi,
                                     double step) {
  double prev_t = lo;
  double prev_v = poly_eval(p, lo).value;
  if (prev_v == 0.0) return Bracket{lo, lo};
  for (std::size_t k = 1;; ++k) {
    double t = lo + static_cast<double>(k) * step;
    const bool last = t >= hi;
    if (last) t = hi;
    const double v = poly_eval(p, t).value;
    if (v == 0.0 || (v > 0.0) != (prev_v > 0.0)) return Bracket{prev_t, t};
    if (last) return std::nullopt;
    prev_t = t;
    prev_v = v;
  }
}

RootResult bisect(const TernaryPolynomial& p, Bracket br, double tol, RootResult res) {
  res.used_bisection = true;
  double lo = br.lo;
  double hi = br.hi;
  const bool lo_positive = poly_eval(p, lo).value > 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double v = poly_eval(p, mid).value;
    const double accept = std::max(tol, rounding_floor(p, mid));
    if (std::abs(v) <= accept) {
      res.root = mid;
      res.residual = std::abs(v);
      res.tolerance = accept;
      return res;
    }
    if (mid <= lo || mid >= hi) break;
    if ((v > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double vlo = std::abs(poly_eval(p, lo).value);
  const double vhi = std::abs(poly_eval(p, hi).value);
  const double t = vlo <= vhi ? lo : hi;
  const double accept = std::max(tol, rounding_floor(p, t));
  const double residual = std::min(vlo, vhi);
  if (residual > accept) {
    throw NoRootError("bisection bracket collapsed with residual " +
                      std::to_string(residual) + " above tolerance");
  }
  res.root = t;
  res.residual = residual;
  res.tolerance = accept;
  return res;
}

}  // namespace

RootResult first_root(const TernaryPolynomial& p, const TransversalityContext& ctx,
                      double tol, const RootSearchOptions& options) {
  ctx.validate();
  if (!(tol > 0.0)) throw ParameterError("root tolerance must be positive");
  const double window = options.window_high;
  if (!(window > 0.0)) throw ParameterError("search window must be positive");

  RootResult res;
  bool converged = false;
  double x = std::clamp(options.newton_start, 0.0, window);
  for (int i = 0;; ++i) {
    const PolyValue e = poly_eval(p, x);
    if (std::abs(e.value) <= std::max(tol, rounding_floor(p, x))) {
      converged = true;
      break;
    }
    if (i == options.max_newton_steps) break;
    if (std::abs(e.derivative) < options.min_derivative) break;
    const double next = x - e.value / e.derivative;
    if (!(next >= 0.0 && next <= window)) break;
    x = next;
    res.newton_steps = i + 1;
  }

  if (converged) {
    // Newton may land on a later root; any sign change before x wins.
    const auto earlier = first_bracket(p, 0.0, x, options.scan_step);
    if (!earlier || earlier->hi >= x) {
      const PolyValue e = poly_eval(p, x);
      res.root = x;
      res.residual = std::abs(e.value);
      res.tolerance = std::max(tol, rounding_floor(p, x));
      return res;
    }
    return bisect(p, *earlier, tol, res);
  }

  const auto bracket = first_bracket(p, 0.0, window, options.scan_step);
  if (!bracket) {
    throw NoRootError("no sign change of the polynomial on [0, " + std::to_string(window) +
                      "] and Newton did not meet the tolerance; use more bits");
  }
  return bisect(p, *bracket, tol, res);
}

std::optional<std::size_t> required_bits(const TransversalityContext& ctx, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
  const double rhs = (1.0 - gamma) * ctx.epsilon() * ctx.delta;
  if (!(rhs > 0.0)) return std::nullopt;
  std::size_t n = 0;
  double power = gamma;  // gamma^{n+1}
  while (power > rhs) {
    power *= gamma;
    ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Recovery

DifferenceStream difference_stream(std::span<const Bit> b, std::span<const Bit> c) {
  const std::size_t len = std::min(b.size(), c.size());
  std::size_t k = 0;
  while (k < len && b[k].value() + c[k].value() == 0) ++k;
  if (k == len) {
    throw NoSignalError("difference stream vanishes: the pair carries no information "
                        "about the base (use a flaky quantizer or more pairs)");
  }
  std::vector<std::int8_t> coeffs;
  coeffs.reserve(len - k);
  for (std::size_t j = k; j < len; ++j) {
    coeffs.push_back(static_cast<std::int8_t>((b[j].value() + c[j].value()) / 2));
  }
  return {TernaryPolynomial(std::move(coeffs)), k};
}

namespace {

RecoveryResult recover_from_poly(const TernaryPolynomial& p, const TransversalityContext& ctx,
                                 const RootSearchOptions& options) {
  ctx.validate();
  const std::size_t n = p.degree();
  const double base = ctx.gamma_low ? *ctx.gamma_low : kInvPhi;
  const double tol = std::pow(base, static_cast<double>(n));
  const RootResult root = first_root(p, ctx, tol, options);

  RecoveryResult out;
  out.gamma_estimate = root.root;
  out.poly_degree_used = n;
  out.residual = root.residual;
  out.tolerance = root.tolerance;

  const auto needed = required_bits(ctx, ctx.gamma_high);
  const bool in_range = root.root >= base && root.root <= ctx.gamma_high;
  const bool enough_bits = needed && n >= *needed;
  out.guarantee = (ctx.epsilon() > 0.0 && enough_bits && in_range) ? Guarantee::Proven
                                                                   : Guarantee::EmpiricalOnly;
  return out;
}

}  // namespace

RecoveryResult recover_gamma_from_zero(std::span<const Bit> bits,
                                       const TransversalityContext& ctx,
                                       const RootSearchOptions& options) {
  if (bits.empty()) throw ParameterError("empty bitstream");
  return recover_from_poly(TernaryPolynomial::from_bits(bits), ctx, options);
}

RecoveryResult recover_gamma_from_pair(std::span<const Bit> b, std::span<const Bit> c,
                                       const TransversalityContext& ctx,
                                       const RootSearchOptions& options,
                                       std::optional<std::size_t> max_degree) {
  DifferenceStream diff = difference_stream(b, c);
  const TernaryPolynomial poly = max_degree ? diff.poly.truncated(*max_degree) : diff.poly;
  RecoveryResult out = recover_from_poly(poly, ctx, options);
  out.shift_k = diff.shift_k;
  return out;
}

MultiPairRecovery recover_gamma_from_pairs(
    std::span<const std::pair<std::vector<Bit>, std::vector<Bit>>> pairs,
    const TransversalityContext& ctx, const RootSearchOptions& options) {
  MultiPairRecovery out;
  std::optional<std::size_t> chosen;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const DifferenceStream d = difference_stream(pairs[i].first, pairs[i].second);
      out.shifts.emplace_back(d.shift_k);
      if (!chosen) chosen = i;
    } catch (const NoSignalError&) {
      out.shifts.emplace_back(std::nullopt);
    }
  }
  if (!chosen) throw NoSignalError("none of the pairs carries a signal");
  out.pair_index = *chosen;
  out.result = recover_gamma_from_pair(pairs[*chosen].first, pairs[*chosen].second, ctx,
                                       options);
  return out;
}

// ---------------------------------------------------------------------------
// Root counting

std::vector<double> sign_change_roots(const TernaryPolynomial& p, double rho, double step) {
  std::vector<double> roots;
  double prev_t = 0.0;
  double prev_v = poly_eval(p, 0.0).value;
  for (std::size_t k = 1;; ++k) {
    double t = static_cast<double>(k) * step;
    const bool last = t >= rho;
    if (last) t = rho;
    const double v = poly_eval(p, t).value;
    if ((v > 0.0) != (prev_v > 0.0)) {
      double lo = prev_t;
      double hi = t;
      const bool lo_positive = prev_v > 0.0;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((poly_eval(p, mid).value > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    if (last) break;
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

TransversalityReport transversality_oracle(std::size_t max_degree, double rho) {
  if (max_degree > 14) throw ParameterError("transversality oracle supports degree <= 14");
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must lie in (0, 1)");
  constexpr double kStep = 1e-4;

  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * kStep;
    if (t >= rho) break;
    grid.push_back(t);
  }
  grid.push_back(rho);
  const std::size_t g = grid.size();

  std::vector<std::vector<double>> powers(max_degree + 1, std::vector<double>(g));
  for (std::size_t k = 0; k < g; ++k) {
    double pw = 1.0;
    for (std::size_t i = 0; i <= max_degree; ++i) {
      powers[i][k] = pw;
      pw *= grid[k];
    }
  }

  TransversalityReport report;
  report.max_degree = max_degree;
  report.rho = rho;
  report.instances = 2;
  for (std::size_t i = 0; i < max_degree; ++i) report.instances *= 3;

  // Depth-first over coefficients 1..max_degree with constant term +1;
  // -p has the same roots, so violations are mirrored afterwards.
  std::vector<std::vector<double>> level(max_degree + 1, std::vector<double>(g));
  std::vector<std::int8_t> coeffs(max_degree + 1, 0);
  coeffs[0] = 1;
  level[0] = powers[0];

  std::function<void(std::size_t, const double*)> visit = [&](std::size_t depth,
                                                              const double* values) {
    if (depth == max_degree) {
      int changes = 0;
      bool positive = values[0] > 0.0;
      for (std::size_t k = 1; k < g; ++k) {
        const bool pos = values[k] > 0.0;
        changes += pos != positive;
        positive = pos;
      }
      if (changes >= 2) {
        TernaryPolynomial p(coeffs);
        TransversalityViolation v{coeffs, sign_change_roots(p, rho, kStep)};
        report.violations.push_back(v);
        for (auto& c : v.coeffs) c = static_cast<std::int8_t>(-c);
        report.violations.push_back(std::move(v));
      }
      return;
    }
    const std::size_t next = depth + 1;
    const double* pw = powers[next].data();
    double* out = level[next].data();
    for (int c : {-1, 0, 1}) {
      coeffs[next] = static_cast<std::int8_t>(c);
      if (c == 0) {
        visit(next, values);
        continue;
      }
      const double s = c;
      for (std::size_t k = 0; k < g; ++k) out[k] = values[k] + s * pw[k];
      visit(next, out);
    }
    coeffs[next] = 0;
  };
  visit(0, level[0].data());
  return report;
}

}  // namespace betaenc
