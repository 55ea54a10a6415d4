#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betaenc/encoders.hpp"
#include "betaenc/quantizers.hpp"

namespace betaenc {

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

// Eigen-decomposition of A = [[0, 1], [l1 l2, l1]]: eigenvalues eps1 and
// -eps2 with unit eigenvectors phi1 = (1, eps1)/s1 and phi2 = (1, -eps2)/s2.
struct Eigensystem {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  Vec2 phi1;
  Vec2 phi2;
};

Eigensystem eigensystem(const LeakParams& leak);

// Coordinates (a, b) of a point along (phi1, phi2).
struct FramePoint {
  double a = 0.0;
  double b = 0.0;
};

// The rectangle R(l1, l2, mu) = [-w, w] x [-r, r] in the eigenvector frame,
// w = h - d, together with the pieces used in its construction:
//   T1 domain  [w - h, w] x [-r, l]   (bit +1, mapped onto the inner box)
//   T2 domain  [-w, h - w] x [-l, r]  (bit -1, mapped onto the inner box)
//   overlap H  [-d, d] x [-r, r]
//   inner box  [-w + mu, w - mu] x [-r + mu, r - mu]
struct InvariantRectangle {
  double h = 0.0;
  double d = 0.0;
  double l = 0.0;
  double r = 0.0;
  double mu = 0.0;
  LeakParams leak;
  Eigensystem eig;
  std::array<Vec2, 4> vertices;  // R, counter-clockwise in the frame

  double half_width() const noexcept { return h - d; }
  Vec2 to_standard(FramePoint p) const;
  FramePoint to_frame(Vec2 p) const;
  // Signed distance to the boundary measured along the frame axes;
  // negative outside.
  double frame_margin(Vec2 p) const;
  bool contains(Vec2 p, double slack = 1e-12) const { return frame_margin(p) >= -slack; }

  std::array<Vec2, 4> t1_domain() const;
  std::array<Vec2, 4> t2_domain() const;
  std::array<Vec2, 4> overlap() const;
  std::array<Vec2, 4> inner_box() const;
};

// Length parameters h, d, l, r evaluated from their closed forms.
// Throws ParameterError when d <= 0 (mu too large for an overlap region).
InvariantRectangle rectangle_params(const LeakParams& leak, double mu);

// Largest mu with d > 0: s1 (2 - eps1) / (eps1 (eps1 + eps2)).
double mu_max(const LeakParams& leak);

// Largest mu for which {0} x [-1, 1] lies in R: s1 (2 - eps1) / (eps1 + eps2).
double input_cover_bound(const LeakParams& leak);

// Uniform lower bound of input_cover_bound over [0.9, 1]^2, taking each
// factor at its own worst case (min s1, min (2 - eps1), max (eps1 + eps2))
// over a grid_n x grid_n leak grid.
double uniform_input_cover_bound(std::size_t grid_n = 101);

struct AlphaInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// Closed-form pieces of the admissible amplifier interval.
double alpha_lower_numerator(double x, double y, double delta);    // N(x, y)
double alpha_lower_denominator(double x, double y);                // D(x, y)
double alpha_upper(double x, double y, double delta);              // U(x, y)

// [L(eps1, eps2), U(eps1, eps1 + eps2)] for one leak pair. Throws
// ParameterError when delta_tol is outside [0, 0.5037] or L > U.
AlphaInterval alpha_bounds(const LeakParams& leak, double delta_tol);

// Uniform bounds over the leak set [0.9, 1]^2 taken at the extreme corners
// of the eigenvalue box: N at (max eps1, max eps2) over D at
// (min eps1, max eps2), and U at (min eps1, max eps1 + eps2).
AlphaInterval worst_case_alpha_bounds(double delta_tol);

// delta at which the worst-case lower and upper amplifier bounds meet.
double admissible_delta_endpoint();

inline constexpr double kMaxAdmissibleDelta = 0.5037;

// [1.198 (1 + delta), 2.281 - 0.952 delta], the uniform certified range.
AlphaInterval uniform_alpha_range(double delta_tol);

// One step of T(u, v) = (v, l1 l2 u + l1 v - Q_alpha^nu(u, v)).
Vec2 map_T(Vec2 state, const LeakParams& leak, const QuantizerSpec& q, PolicyState& policy);
// The affine branch with a fixed bit: +1 gives T1, -1 gives T2.
Vec2 map_T_branch(Vec2 state, const LeakParams& leak, Bit bit);

struct InvarianceOptions {
  bool run_orbits = true;
  std::size_t orbit_steps = 10000;
  std::size_t start_points = 100;  // spread over {0} x [-1, 1]
  std::uint64_t seed = 0;
  double slack = 1e-9;
};

struct InvarianceReport {
  bool geometry_ok = true;  // vertex images at frame distance >= mu inside R
  bool strip_ok = true;     // F intersected with R lies in H, signs consistent
  bool orbit_ok = true;     // perturbed orbits stay in R
  std::vector<std::string> failures;
  std::optional<Vec2> witness;

  bool passed() const noexcept { return geometry_ok && strip_ok && orbit_ok; }
};

// Positive-invariance check of R(l1, l2, mu) for Q_alpha^nu. Orbits run under
// every built-in flaky policy with per-step perturbations of frame norm <= mu.
InvarianceReport check_invariance(const LeakParams& leak, double mu, const QuantizerSpec& q,
                                  const InvarianceOptions& options = {});

// Every built-in policy, the random one seeded with `seed`.
std::vector<FlakyPolicy> builtin_policies(std::uint64_t seed);

// Largest |u_n| over `steps` iterations of the leaky GRE from (0, x).
double max_orbit_state(double x, const LeakParams& leak, const QuantizerSpec& q,
                       std::size_t steps);

struct OrbitSweepRecord {
  LeakParams leak;
  double alpha = 0.0;
  double x = 0.0;
  FlakyPolicy::Kind policy = FlakyPolicy::Kind::AlwaysMinus;
  double max_state = 0.0;
  bool bounded = true;
};

struct OrbitSweepConfig {
  std::size_t leak_grid_n = 11;  // over [0.9, 1]^2
  std::size_t alpha_points = 9;  // over uniform_alpha_range(tolerance)
  double tolerance = 0.3;        // quantizer flakiness nu = tolerance
  std::vector<double> inputs{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::size_t steps = 10000;
  double state_bound = 5.0;
  std::uint64_t seed = 0;
  std::optional<AlphaInterval> alpha_range;  // overrides the uniform range
};

// Boundedness of leaky-GRE orbits over a leak x alpha x input x policy grid,
// in grid order.
std::vector<OrbitSweepRecord> orbit_sweep(const OrbitSweepConfig& cfg);

}  // namespace betaenc
