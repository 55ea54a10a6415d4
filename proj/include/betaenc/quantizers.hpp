#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace betaenc {

// A single output bit, restricted to -1 or +1.
class Bit {
 public:
  static constexpr Bit plus() noexcept { return Bit(1); }
  static constexpr Bit minus() noexcept { return Bit(-1); }
  // +1 for positive sign, -1 otherwise.
  static constexpr Bit from_positive(bool positive) noexcept {
    return positive ? plus() : minus();
  }

  constexpr int value() const noexcept { return value_; }
  constexpr Bit operator-() const noexcept { return Bit(-value_); }
  constexpr bool operator==(const Bit&) const noexcept = default;

 private:
  constexpr explicit Bit(int v) noexcept : value_(static_cast<std::int8_t>(v)) {}
  std::int8_t value_;
};

// How a flaky quantizer resolves inputs that fall inside its flaky zone.
struct FlakyPolicy {
  enum class Kind { AlwaysMinus, AlwaysPlus, Toggle, SeededRandom };

  Kind kind = Kind::AlwaysMinus;
  std::uint64_t seed = 0;  // SeededRandom only

  static FlakyPolicy always_minus() { return {Kind::AlwaysMinus, 0}; }
  static FlakyPolicy always_plus() { return {Kind::AlwaysPlus, 0}; }
  static FlakyPolicy toggle() { return {Kind::Toggle, 0}; }
  static FlakyPolicy seeded_random(std::uint64_t seed) {
    return {Kind::SeededRandom, seed};
  }

  bool operator==(const FlakyPolicy&) const = default;
};

std::string_view to_string(FlakyPolicy::Kind kind);
// Accepts "always-minus", "always-plus", "toggle", "random".
FlakyPolicy::Kind parse_policy_kind(std::string_view name);

// Mutable decision state for one policy. Single owner; give each encoder
// its own instance.
class PolicyState {
 public:
  explicit PolicyState(FlakyPolicy policy = {});

  Bit decide();
  const FlakyPolicy& policy() const noexcept { return policy_; }

 private:
  FlakyPolicy policy_;
  bool next_toggle_plus_ = true;
  std::mt19937_64 rng_;
};

// Flaky tolerance nu, two-input amplifier alpha, and the flaky-zone policy.
struct QuantizerSpec {
  double nu = 0.0;
  double alpha = 2.0;
  FlakyPolicy policy{};

  // Throws ParameterError unless nu >= 0 and alpha > 0 (both finite).
  void validate() const;
};

// Sign quantizer: -1 for u <= 0, +1 for u > 0.
Bit q_ideal(double u);

// -1 below -nu, +1 at or above nu, policy decision on [-nu, nu).
Bit q_flaky(double u, const QuantizerSpec& spec, PolicyState& state);

// q_flaky applied to u + alpha * v.
Bit q2_flaky(double u, double v, const QuantizerSpec& spec, PolicyState& state);

}  // namespace betaenc
