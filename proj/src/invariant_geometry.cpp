#include "betaenc/invariant_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "betaenc/errors.hpp"

namespace betaenc {

Eigensystem eigensystem(const LeakParams& leak) {
  if (!(leak.lambda1 > 0.0 && leak.lambda2 > 0.0)) {
    throw ParameterError("leak factors must be positive");
  }
  const double l1 = leak.lambda1;
  const double root = std::sqrt(l1 * l1 + 4.0 * l1 * leak.lambda2);
  Eigensystem e;
  e.eps1 = 0.5 * (l1 + root);
  e.eps2 = 0.5 * (root - l1);
  e.s1 = std::sqrt(1.0 + e.eps1 * e.eps1);
  e.s2 = std::sqrt(1.0 + e.eps2 * e.eps2);
  e.phi1 = {1.0 / e.s1, e.eps1 / e.s1};
  e.phi2 = {1.0 / e.s2, -e.eps2 / e.s2};
  return e;
}

// ---------------------------------------------------------------------------
// Rectangle

Vec2 InvariantRectangle::to_standard(FramePoint p) const {
  return {p.a * eig.phi1.u + p.b * eig.phi2.u, p.a * eig.phi1.v + p.b * eig.phi2.v};
}

FramePoint InvariantRectangle::to_frame(Vec2 p) const {
  const double sum = eig.eps1 + eig.eps2;
  return {(eig.eps2 * p.u + p.v) * eig.s1 / sum, (eig.eps1 * p.u - p.v) * eig.s2 / sum};
}

double InvariantRectangle::frame_margin(Vec2 p) const {
  const FramePoint f = to_frame(p);
  return std::min(half_width() - std::abs(f.a), r - std::abs(f.b));
}

namespace {

std::array<Vec2, 4> frame_box(const InvariantRectangle& rect, double a0, double a1, double b0,
                              double b1) {
  return {rect.to_standard({a0, b0}), rect.to_standard({a1, b0}),
          rect.to_standard({a1, b1}), rect.to_standard({a0, b1})};
}

}  // namespace

std::array<Vec2, 4> InvariantRectangle::t1_domain() const {
  const double w = half_width();
  return frame_box(*this, w - h, w, -r, l);
}

std::array<Vec2, 4> InvariantRectangle::t2_domain() const {
  const double w = half_width();
  return frame_box(*this, -w, h - w, -l, r);
}

std::array<Vec2, 4> InvariantRectangle::overlap() const { return frame_box(*this, -d, d, -r, r); }

std::array<Vec2, 4> InvariantRectangle::inner_box() const {
  const double w = half_width();
  return frame_box(*this, -w + mu, w - mu, -r + mu, r - mu);
}

InvariantRectangle rectangle_params(const LeakParams& leak, double mu) {
  leak.validate();
  if (!(mu >= 0.0)) throw ParameterError("mu must be non-negative");
  const Eigensystem e = eigensystem(leak);
  const double e1 = e.eps1;
  const double e2 = e.eps2;
  const double sum = e1 + e2;

  InvariantRectangle rect;
  rect.leak = leak;
  rect.eig = e;
  rect.mu = mu;
  rect.h = 2.0 * mu / (1.0 - e1) + 2.0 * e.s1 / (e1 * (e1 - 1.0) * sum);
  rect.d = mu / (1.0 - e1) + e.s1 * (2.0 - e1) / (e1 * (e1 - 1.0) * sum);
  rect.l = mu / (1.0 - e2) + e.s2 * (2.0 - e2) / (e2 * (1.0 - e2) * sum);
  rect.r = mu / (1.0 - e2) + e.s2 / ((1.0 - e2) * sum);
  if (!(rect.d > 0.0)) {
    throw ParameterError("mu is too large: the overlap region H is empty (d <= 0)");
  }
  const double w = rect.half_width();
  rect.vertices = frame_box(rect, -w, w, -rect.r, rect.r);
  return rect;
}

double mu_max(const LeakParams& leak) {
  const Eigensystem e = eigensystem(leak);
  return e.s1 * (2.0 - e.eps1) / (e.eps1 * (e.eps1 + e.eps2));
}

double input_cover_bound(const LeakParams& leak) {
  const Eigensystem e = eigensystem(leak);
  return e.s1 * (2.0 - e.eps1) / (e.eps1 + e.eps2);
}

namespace {

double grid_value(std::size_t i, std::size_t n, double lo, double hi) {
  return n <= 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Ranges of eps1, eps2 and eps1 + eps2 over the leak set [0.9, 1]^2.
struct EigenRanges {
  double e1_min = std::numeric_limits<double>::infinity();
  double e1_max = -std::numeric_limits<double>::infinity();
  double e2_min = std::numeric_limits<double>::infinity();
  double e2_max = -std::numeric_limits<double>::infinity();
  double sum_min = std::numeric_limits<double>::infinity();
  double sum_max = -std::numeric_limits<double>::infinity();
  double s1_min = std::numeric_limits<double>::infinity();
};

EigenRanges eigen_ranges(std::size_t grid_n) {
  EigenRanges out;
  for (std::size_t i = 0; i < grid_n; ++i) {
    for (std::size_t j = 0; j < grid_n; ++j) {
      const Eigensystem e = eigensystem({grid_value(i, grid_n, 0.9, 1.0),
                                         grid_value(j, grid_n, 0.9, 1.0)});
      out.e1_min = std::min(out.e1_min, e.eps1);
      out.e1_max = std::max(out.e1_max, e.eps1);
      out.e2_min = std::min(out.e2_min, e.eps2);
      out.e2_max = std::max(out.e2_max, e.eps2);
      out.sum_min = std::min(out.sum_min, e.eps1 + e.eps2);
      out.sum_max = std::max(out.sum_max, e.eps1 + e.eps2);
      out.s1_min = std::min(out.s1_min, e.s1);
    }
  }
  return out;
}

void require_admissible_delta(double delta_tol) {
  if (!(delta_tol >= 0.0 && delta_tol <= kMaxAdmissibleDelta)) {
    throw ParameterError("quantizer tolerance must lie in [0, 0.5037]");
  }
}

}  // namespace

double uniform_input_cover_bound(std::size_t grid_n) {
  const EigenRanges rg = eigen_ranges(grid_n);
  return rg.s1_min * (2.0 - rg.e1_max) / rg.sum_max;
}

// ---------------------------------------------------------------------------
// Amplifier bounds

double alpha_lower_numerator(double x, double y, double delta) {
  return x * (x - 1.0) - (2.0 - x) * (1.0 - y) + delta * x * (x - 1.0) * (x + y) * (1.0 - y);
}

double alpha_lower_denominator(double x, double y) {
  return x * ((2.0 - x) * (1.0 - y) + y * (x - 1.0));
}

double alpha_upper(double x, double y, double delta) {
  return (2.0 + x * y - 2.0 * y - delta * x * y * (x - 1.0) * (1.0 - y + x)) / (x * (y - 2.0));
}

AlphaInterval alpha_bounds(const LeakParams& leak, double delta_tol) {
  require_admissible_delta(delta_tol);
  const Eigensystem e = eigensystem(leak);
  AlphaInterval out;
  out.lower = alpha_lower_numerator(e.eps1, e.eps2, delta_tol) /
              alpha_lower_denominator(e.eps1, e.eps2);
  out.upper = alpha_upper(e.eps1, e.eps1 + e.eps2, delta_tol);
  if (out.lower > out.upper) {
    throw ParameterError("tolerance too large for this leak pair: L > U");
  }
  return out;
}

AlphaInterval worst_case_alpha_bounds(double delta_tol) {
  if (!(delta_tol >= 0.0)) throw ParameterError("tolerance must be non-negative");
  const Eigensystem lo = eigensystem({0.9, 0.9});
  const Eigensystem hi = eigensystem({1.0, 1.0});
  return {alpha_lower_numerator(hi.eps1, hi.eps2, delta_tol) /
              alpha_lower_denominator(lo.eps1, hi.eps2),
          alpha_upper(lo.eps1, hi.eps1 + hi.eps2, delta_tol)};
}

double admissible_delta_endpoint() {
  auto gap = [&](double delta) {
    const AlphaInterval w = worst_case_alpha_bounds(delta);
    return w.upper - w.lower;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (!(gap(lo) > 0.0 && gap(hi) < 0.0)) {
    throw NumericalError("worst-case amplifier bounds do not cross on [0, 1]");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AlphaInterval uniform_alpha_range(double delta_tol) {
  require_admissible_delta(delta_tol);
  return {1.198 * (1.0 + delta_tol), 2.281 - 0.952 * delta_tol};
}

// ---------------------------------------------------------------------------
// Dynamics

Vec2 map_T_branch(Vec2 state, const LeakParams& leak, Bit bit) {
  const double l1 = leak.lambda1;
  return {state.v, l1 * leak.lambda2 * state.u + l1 * state.v - bit.value()};
}

Vec2 map_T(Vec2 state, const LeakParams& leak, const QuantizerSpec& q, PolicyState& policy) {
  return map_T_branch(state, leak, q2_flaky(state.u, state.v, q, policy));
}

std::vector<FlakyPolicy> builtin_policies(std::uint64_t seed) {
  return {FlakyPolicy::always_minus(), FlakyPolicy::always_plus(), FlakyPolicy::toggle(),
          FlakyPolicy::seeded_random(seed)};
}

namespace {

std::string describe(Vec2 p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.u << ", " << p.v << ")";
  return os.str();
}

// Sutherland-Hodgman clip of a convex polygon to {p : sign * s(p) <= bound}
// with s(p) = u + alpha v.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, double alpha, double sign, double bound) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  auto level = [&](Vec2 p) { return sign * (p.u + alpha * p.v) - bound; };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 cur = poly[i];
    const Vec2 nxt = poly[(i + 1) % n];
    const double fc = level(cur);
    const double fn = level(nxt);
    if (fc <= 0.0) out.push_back(cur);
    if ((fc < 0.0 && fn > 0.0) || (fc > 0.0 && fn < 0.0)) {
      const double t = fc / (fc - fn);
      out.push_back({cur.u + t * (nxt.u - cur.u), cur.v + t * (nxt.v - cur.v)});
    }
  }
  return out;
}

}  // namespace

InvarianceReport check_invariance(const LeakParams& leak, double mu, const QuantizerSpec& q,
                                  const InvarianceOptions& options) {
  q.validate();
  InvarianceReport report;
  if (!(mu < mu_max(leak))) {
    report.geometry_ok = false;
    report.failures.push_back("geometry: mu >= mu_max, no overlap region");
    return report;
  }
  const InvariantRectangle rect = rectangle_params(leak, mu);
  const double w = rect.half_width();

  // (i) images of the two affine pieces of R.
  const std::array<Vec2, 4> piece1 = frame_box(rect, -rect.d, w, -rect.r, rect.r);
  const std::array<Vec2, 4> piece2 = frame_box(rect, -w, rect.d, -rect.r, rect.r);
  auto check_images = [&](const std::array<Vec2, 4>& piece, Bit bit, const char* name) {
    for (const Vec2& p : piece) {
      const Vec2 img = map_T_branch(p, leak, bit);
      if (rect.frame_margin(img) < mu - options.slack) {
        report.geometry_ok = false;
        report.failures.push_back(std::string("geometry: ") + name + " image of vertex " +
                                  describe(p) + " is " + describe(img) +
                                  ", less than mu inside R");
        if (!report.witness) report.witness = p;
      }
    }
  };
  check_images(piece1, Bit::plus(), "T1");
  check_images(piece2, Bit::minus(), "T2");

  // (ii) the flaky strip F = {|u + alpha v| < nu} meets R only inside H, and
  // the two T-only parts of R sit on the matching sides of the strip.
  std::vector<Vec2> poly(rect.vertices.begin(), rect.vertices.end());
  poly = clip(poly, q.alpha, 1.0, q.nu);
  poly = clip(poly, q.alpha, -1.0, q.nu);
  for (const Vec2& p : poly) {
    if (std::abs(rect.to_frame(p).a) > rect.d + options.slack) {
      report.strip_ok = false;
      report.failures.push_back("strip: flaky-zone point " + describe(p) +
                                " of R lies outside the overlap region H");
      if (!report.witness) report.witness = p;
      break;
    }
  }
  for (double b : {-rect.r, rect.r}) {
    const Vec2 right = rect.to_standard({w, b});
    const Vec2 left = rect.to_standard({-w, b});
    if (right.u + q.alpha * right.v < q.nu - options.slack) {
      report.strip_ok = false;
      report.failures.push_back("strip: T1-only corner " + describe(right) +
                                " is not quantized to +1");
      if (!report.witness) report.witness = right;
    }
    if (left.u + q.alpha * left.v > -q.nu + options.slack) {
      report.strip_ok = false;
      report.failures.push_back("strip: T2-only corner " + describe(left) +
                                " is not quantized to -1");
      if (!report.witness) report.witness = left;
    }
  }

  // (iii) perturbed orbits from {0} x [-1, 1].
  if (options.run_orbits) {
    std::mt19937_64 noise(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const FlakyPolicy& policy : builtin_policies(options.seed)) {
      for (std::size_t k = 0; k < options.start_points && report.orbit_ok; ++k) {
        const double x = options.start_points == 1
                             ? 0.0
                             : -1.0 + 2.0 * static_cast<double>(k) /
                                          static_cast<double>(options.start_points - 1);
        Vec2 state{0.0, x};
        if (!rect.contains(state, options.slack)) {
          report.orbit_ok = false;
          report.failures.push_back("orbit: start point " + describe(state) + " is outside R");
          if (!report.witness) report.witness = state;
          break;
        }
        PolicyState ps(policy);
        for (std::size_t step = 0; step < options.orbit_steps; ++step) {
          state = map_T(state, leak, q, ps);
          if (mu > 0.0) {
            const double radius = mu * std::sqrt(unit(noise));
            const double angle = 2.0 * std::numbers::pi * unit(noise);
            const Vec2 kick = rect.to_standard({radius * std::cos(angle), radius * std::sin(angle)});
            state.u += kick.u;
            state.v += kick.v;
          }
          if (!rect.contains(state, options.slack)) {
            report.orbit_ok = false;
            report.failures.push_back("orbit: policy " + std::string(to_string(policy.kind)) +
                                      " from x = " + std::to_string(x) + " left R at step " +
                                      std::to_string(step + 1) + " at " + describe(state));
            if (!report.witness) report.witness = state;
            break;
          }
        }
      }
    }
  }
  return report;
}

double max_orbit_state(double x, const LeakParams& leak, const QuantizerSpec& q,
                       std::size_t steps) {
  PolicyState ps(q.policy);
  Vec2 state{0.0, x};
  double peak = std::abs(x);
  for (std::size_t i = 0; i < steps; ++i) {
    state = map_T(state, leak, q, ps);
    peak = std::max(peak, std::abs(state.v));
    if (!std::isfinite(state.v) || peak > 1e6) break;
  }
  return peak;
}

std::vector<OrbitSweepRecord> orbit_sweep(const OrbitSweepConfig& cfg) {
  const AlphaInterval range = cfg.alpha_range ? *cfg.alpha_range : uniform_alpha_range(cfg.tolerance);
  std::vector<OrbitSweepRecord> out;
  out.reserve(cfg.leak_grid_n * cfg.leak_grid_n * cfg.alpha_points * cfg.inputs.size() * 4);
  for (std::size_t i = 0; i < cfg.leak_grid_n; ++i) {
    for (std::size_t j = 0; j < cfg.leak_grid_n; ++j) {
      const LeakParams leak{grid_value(i, cfg.leak_grid_n, 0.9, 1.0),
                            grid_value(j, cfg.leak_grid_n, 0.9, 1.0)};
      for (std::size_t a = 0; a < cfg.alpha_points; ++a) {
        const double alpha = grid_value(a, cfg.alpha_points, range.lower, range.upper);
        for (double x : cfg.inputs) {
          for (const FlakyPolicy& policy : builtin_policies(cfg.seed)) {
            const QuantizerSpec q{cfg.tolerance, alpha, policy};
            OrbitSweepRecord rec;
            rec.leak = leak;
            rec.alpha = alpha;
            rec.x = x;
            rec.policy = policy.kind;
            rec.max_state = max_orbit_state(x, leak, q, cfg.steps);
            rec.bounded = rec.max_state < cfg.state_bound;
            out.push_back(rec);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace betaenc
