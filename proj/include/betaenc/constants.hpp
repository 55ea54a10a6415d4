#pragma once

namespace betaenc {

inline constexpr double kPhi = 1.6180339887498948482;     // golden ratio
inline constexpr double kInvPhi = 0.6180339887498948482;  // 1 / golden ratio

// Right end of the interval on which class-B power series are
// delta-transversal (at most one simple root on (0, kTransversalityLimit]).
inline constexpr double kTransversalityLimit = 0.6491;

// Transversality constants known from the literature.
inline constexpr double kDeltaAt063 = 0.07;
inline constexpr double kDeltaAt06491 = 0.00008;

}  // namespace betaenc
