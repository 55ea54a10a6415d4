#include "betaenc/quantizers.hpp"

#include <cmath>
#include <string>

#include "betaenc/errors.hpp"

namespace betaenc {

std::string_view to_string(FlakyPolicy::Kind kind) {
  switch (kind) {
    case FlakyPolicy::Kind::AlwaysMinus:
      return "always-minus";
    case FlakyPolicy::Kind::AlwaysPlus:
      return "always-plus";
    case FlakyPolicy::Kind::Toggle:
      return "toggle";
    case FlakyPolicy::Kind::SeededRandom:
      return "random";
  }
  return "unknown";
}

FlakyPolicy::Kind parse_policy_kind(std::string_view name) {
  if (name == "always-minus") return FlakyPolicy::Kind::AlwaysMinus;
  if (name == "always-plus") return FlakyPolicy::Kind::AlwaysPlus;
  if (name == "toggle") return FlakyPolicy::Kind::Toggle;
  if (name == "random") return FlakyPolicy::Kind::SeededRandom;
  throw ParameterError("unknown flaky policy '" + std::string(name) + "'");
}

PolicyState::PolicyState(FlakyPolicy policy) : policy_(policy), rng_(policy.seed) {}

Bit PolicyState::decide() {
  switch (policy_.kind) {
    case FlakyPolicy::Kind::AlwaysMinus:
      return Bit::minus();
    case FlakyPolicy::Kind::AlwaysPlus:
      return Bit::plus();
    case FlakyPolicy::Kind::Toggle: {
      const bool plus = next_toggle_plus_;
      next_toggle_plus_ = !next_toggle_plus_;
      return Bit::from_positive(plus);
    }
    case FlakyPolicy::Kind::SeededRandom:
      return Bit::from_positive((rng_() >> 63) != 0);
  }
  return Bit::minus();
}

void QuantizerSpec::validate() const {
  if (!std::isfinite(nu) || nu < 0.0) {
    throw ParameterError("quantizer tolerance nu must be finite and >= 0");
  }
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ParameterError("quantizer amplifier alpha must be finite and > 0");
  }
}

Bit q_ideal(double u) {
  if (!std::isfinite(u)) throw InvalidState("quantizer input is not finite");
  return Bit::from_positive(u > 0.0);
}

Bit q_flaky(double u, const QuantizerSpec& spec, PolicyState& state) {
  if (!std::isfinite(u)) throw InvalidState("quantizer input is not finite");
  if (u < -spec.nu) return Bit::minus();
  if (u >= spec.nu) return Bit::plus();
  return state.decide();
}

Bit q2_flaky(double u, double v, const QuantizerSpec& spec, PolicyState& state) {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw InvalidState("quantizer input is not finite");
  }
  return q_flaky(u + spec.alpha * v, spec, state);
}

}  // namespace betaenc
