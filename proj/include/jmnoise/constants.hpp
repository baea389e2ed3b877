#pragma once

// Central tolerance table. All algebraic identity checks in the library go
// through these constants; tests reference them instead of redefining magic
// numbers.

namespace jmnoise::tol {

inline constexpr double algebra = 1e-10;      // operator identities, POVM completeness
inline constexpr double psd = 1e-10;          // smallest-eigenvalue floor
inline constexpr double unitary = 1e-10;      // U U^dag - 1 deviation
inline constexpr double hermitian = 1e-12;    // M - M^dag deviation
inline constexpr double unit_norm = 1e-12;    // state-vector normalization
inline constexpr double trace_one = 1e-12;    // density-operator trace
inline constexpr double membership = 1e-10;   // region boundary slack
inline constexpr double bisection_dt = 1e-12; // root-finder bracket width

}  // namespace jmnoise::tol
