#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical routines.

#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "betaenc/quantizers.hpp"

namespace oracle {

using hp = boost::multiprecision::cpp_dec_float_50;

inline std::vector<int> values(const std::vector<betaenc::Bit>& bits) {
  std::vector<int> out;
  for (auto b : bits) out.push_back(b.value());
  return out;
}

// |x - sum_{j=1}^{n} b_j g^{j + shift}| in 50-digit arithmetic, summing
// powers directly (no Horner).
inline double expansion_error(double x, const std::vector<betaenc::Bit>& bits, double g,
                              std::size_t n, int shift = 0) {
  hp sum = 0;
  const hp base = g;
  for (std::size_t j = 1; j <= n; ++j) {
    sum += hp(bits[j - 1].value()) * boost::multiprecision::pow(base, static_cast<int>(j) + shift);
  }
  return static_cast<double>(boost::multiprecision::abs(hp(x) - sum));
}

// Polynomial value by explicit powers.
inline hp poly_value(const std::vector<int>& c, const hp& t) {
  hp acc = 0;
  hp p = 1;
  for (int ci : c) {
    acc += ci * p;
    p *= t;
  }
  return acc;
}

inline double naive_poly(const std::vector<int>& c, double t) {
  return static_cast<double>(poly_value(c, hp(t)));
}

// Bisection for a sign change of p on [lo, hi] in 50-digit arithmetic.
inline double bisect_root(const std::vector<int>& c, double lo_d, double hi_d) {
  hp lo = lo_d;
  hp hi = hi_d;
  const bool lo_pos = poly_value(c, lo) > 0;
  for (int i = 0; i < 200; ++i) {
    const hp mid = (lo + hi) / 2;
    if ((poly_value(c, mid) > 0) == lo_pos) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>((lo + hi) / 2);
}

// First sign change of p on (0, hi] on a fine grid, refined in high precision.
inline double first_root(const std::vector<int>& c, double hi, double step = 1e-4) {
  double prev = 0.0;
  bool prev_pos = poly_value(c, hp(0)) > 0;
  for (double t = step; t <= hi + 1e-15; t += step) {
    const bool pos = poly_value(c, hp(t)) > 0;
    if (pos != prev_pos) return bisect_root(c, prev, t);
    prev = t;
  }
  return -1.0;
}

// Ideal GRE bits run in 50-digit arithmetic: u_0 = 0, u_1 = x,
// b_{n+1} = sign(u_n + alpha u_{n+1}) (>= 0 gives +1),
// u_{n+1} = l1 u_n + l1 l2 u_{n-1} - b_n.
inline std::vector<int> gre_bits(double x, double l1, double l2, double alpha, std::size_t n) {
  std::vector<int> out;
  hp prev = 0;
  hp cur = x;
  const hp a = alpha;
  const hp L1 = l1;
  const hp L12 = hp(l1) * hp(l2);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = (prev + a * cur) >= 0 ? 1 : -1;
    out.push_back(b);
    const hp next = L1 * cur + L12 * prev - b;
    prev = cur;
    cur = next;
  }
  return out;
}

}  // namespace oracle
