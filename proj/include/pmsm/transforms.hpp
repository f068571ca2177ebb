#pragma once

#include <numbers>

namespace pmsm {

/// Spatial displacement between consecutive phases of a three-phase winding.
inline constexpr double kPhaseShift = 2.0 * std::numbers::pi / 3.0;

/// Per-phase quantity in the stationary frame.
struct AbcVector {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    friend constexpr AbcVector operator+(AbcVector x, AbcVector y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
    friend constexpr AbcVector operator-(AbcVector x, AbcVector y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
    friend constexpr AbcVector operator*(double s, AbcVector x) { return {s * x.a, s * x.b, s * x.c}; }
    friend constexpr bool operator==(const AbcVector&, const AbcVector&) = default;
};

/// Quantity in the synchronously rotating frame plus the zero-sequence part.
struct Dq0Vector {
    double d = 0.0;
    double q = 0.0;
    double zero = 0.0;

    friend constexpr Dq0Vector operator+(Dq0Vector x, Dq0Vector y) { return {x.d + y.d, x.q + y.q, x.zero + y.zero}; }
    friend constexpr Dq0Vector operator-(Dq0Vector x, Dq0Vector y) { return {x.d - y.d, x.q - y.q, x.zero - y.zero}; }
    friend constexpr Dq0Vector operator*(double s, Dq0Vector x) { return {s * x.d, s * x.q, s * x.zero}; }
    friend constexpr bool operator==(const Dq0Vector&, const Dq0Vector&) = default;
};

/**
 * @brief Combined Clarke/Park transform, amplitude-invariant (2/3) scaling.
 *
 * d = 2/3 * sum h_x cos(theta - k beta), q = 2/3 * sum h_x sin(theta - k beta),
 * zero = 1/3 * sum h_x. The q row uses +sin; every dq-frame sign in the library
 * follows from this choice.
 */
Dq0Vector park_forward(const AbcVector& h, double theta);

/// Exact inverse of park_forward: h_x = d cos(theta - k beta) + q sin(theta - k beta) + zero.
AbcVector park_inverse(const Dq0Vector& h, double theta);

/// Derivative of park_inverse(h, theta(t)) for a time-varying h and theta.
AbcVector park_inverse_rate(const Dq0Vector& h, const Dq0Vector& dh, double theta, double omega_e);

} // namespace pmsm
