#pragma once

// Brute-force reference computations used only by the tests. Everything here
// is written directly from the per-phase circuit equations with explicit 3x3
// matrices and does not call the library's transform or imbalance code.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "pmsm/machine_model.hpp"

namespace oracle {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kBeta = 2.0 * kPi / 3.0;

inline Vec3 mul(const Mat3& m, const Vec3& v)
{
    Vec3 out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out[r] += m[r][c] * v[c];
    return out;
}

inline Mat3 mul(const Mat3& a, const Mat3& b)
{
    Mat3 out{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int k = 0; k < 3; ++k)
                out[r][c] += a[r][k] * b[k][c];
    return out;
}

inline Mat3 forward_matrix(double theta)
{
    Mat3 m{};
    for (int k = 0; k < 3; ++k) {
        m[0][k] = 2.0 / 3.0 * std::cos(theta - k * kBeta);
        m[1][k] = 2.0 / 3.0 * std::sin(theta - k * kBeta);
        m[2][k] = 1.0 / 3.0;
    }
    return m;
}

inline Mat3 inverse_matrix(double theta)
{
    Mat3 m{};
    for (int k = 0; k < 3; ++k) {
        m[k][0] = std::cos(theta - k * kBeta);
        m[k][1] = std::sin(theta - k * kBeta);
        m[k][2] = 1.0;
    }
    return m;
}

inline Mat3 inverse_matrix_dtheta(double theta)
{
    Mat3 m{};
    for (int k = 0; k < 3; ++k) {
        m[k][0] = -std::sin(theta - k * kBeta);
        m[k][1] = std::cos(theta - k * kBeta);
        m[k][2] = 0.0;
    }
    return m;
}

inline Mat3 inductance(const pmsm::MachineParameters& p)
{
    return {{{p.l_a, -p.m_ab, -p.m_ca}, {-p.m_ab, p.l_b, -p.m_bc}, {-p.m_ca, -p.m_bc, p.l_c}}};
}

struct Excitation {
    Vec3 i_abc;
    Vec3 di_abc;
};

/// Phase currents and their time derivative for dq0 currents at angle theta, speed omega.
inline Excitation excite(const pmsm::OperatingPoint& op)
{
    const Vec3 i_dq0{op.i_d, op.i_q, op.i_0};
    const Vec3 di_dq0{op.di_d, op.di_q, op.di_0};
    const auto i_abc = mul(inverse_matrix(op.theta), i_dq0);
    auto di_abc = mul(inverse_matrix(op.theta), di_dq0);
    const auto rot = mul(inverse_matrix_dtheta(op.theta), i_dq0);
    for (int k = 0; k < 3; ++k)
        di_abc[k] += op.omega_e * rot[k];
    return {i_abc, di_abc};
}

/// dq0 voltages of the per-phase machine, straight from the circuit equations.
inline Vec3 dq0_voltage(const pmsm::MachineParameters& p, const pmsm::OperatingPoint& op)
{
    const auto [i, di] = excite(op);
    const Vec3 r{p.r_a, p.r_b, p.r_c};
    const Vec3 lam{p.lam_a, p.lam_b, p.lam_c};
    const auto l_di = mul(inductance(p), di);
    Vec3 v{};
    for (int k = 0; k < 3; ++k)
        v[k] = r[k] * i[k] + l_di[k] + op.omega_e * lam[k] * std::sin(op.theta - k * kBeta);
    return mul(forward_matrix(op.theta), v);
}

/// Voltage difference between a machine and its nominal (all deviations removed) counterpart.
inline Vec3 dq0_delta(const pmsm::MachineParameters& p, const pmsm::MachineParameters& nominal,
                      const pmsm::OperatingPoint& op)
{
    const auto a = dq0_voltage(p, op);
    const auto b = dq0_voltage(nominal, op);
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

/// Machine whose only non-zero parameters are the given deviations (so its voltage is the delta itself).
inline pmsm::MachineParameters deviation_machine(const pmsm::Triple& d_r, const pmsm::Triple& d_l,
                                                 const pmsm::Triple& d_m, const pmsm::Triple& d_lam)
{
    pmsm::MachineParameters p;
    p.r_a = d_r[0], p.r_b = d_r[1], p.r_c = d_r[2];
    p.l_a = d_l[0], p.l_b = d_l[1], p.l_c = d_l[2];
    p.m_ab = d_m[0], p.m_bc = d_m[1], p.m_ca = d_m[2];
    p.lam_a = d_lam[0], p.lam_b = d_lam[1], p.lam_c = d_lam[2];
    return p;
}

/// Coefficients of f(theta) = c0 + c1 cos 2theta + s1 sin 2theta by exact quadrature over one period.
struct Projection {
    double dc;
    double k;
    double phi; // f = dc + k cos(2 theta + phi)
};

template <class F>
Projection project_second(F f, int points = 96)
{
    double c0 = 0.0, cc = 0.0, ss = 0.0;
    for (int n = 0; n < points; ++n) {
        const double t = 2.0 * kPi * n / points;
        const double v = f(t);
        c0 += v;
        cc += v * std::cos(2.0 * t);
        ss += v * std::sin(2.0 * t);
    }
    c0 /= points;
    cc *= 2.0 / points;
    ss *= 2.0 / points;
    const std::complex<double> z(cc, -ss);
    return {c0, std::abs(z), std::abs(z) == 0.0 ? 0.0 : std::arg(z)};
}

/// Co-energy integral sum_x int_0^1 lambda_x(s i) i_x ds by 3-point Gauss-Legendre (exact for linear flux).
inline double coenergy_quadrature(const pmsm::MachineParameters& p, const Vec3& i, double theta)
{
    const double nodes[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const Vec3 lam{p.lam_a, p.lam_b, p.lam_c};
    double w = 0.0;
    for (int g = 0; g < 3; ++g) {
        Vec3 cur{};
        for (int k = 0; k < 3; ++k)
            cur[k] = nodes[g] * i[k];
        const auto flux_l = mul(inductance(p), cur);
        for (int k = 0; k < 3; ++k) {
            const double flux = flux_l[k] - lam[k] * std::cos(theta - k * kBeta);
            w += weights[g] * flux * i[k];
        }
    }
    return w;
}

/// Mechanical torque by central difference of the numerically integrated co-energy.
inline double torque_finite_difference(const pmsm::MachineParameters& p, const Vec3& i, double theta,
                                       double h = 1e-6)
{
    return p.pole_pairs * (coenergy_quadrature(p, i, theta + h) - coenergy_quadrature(p, i, theta - h)) / (2.0 * h);
}

/// Reference machine used across the tests: R = 0.1 ohm, L + M = 2e-4 H, lam = 0.05 Wb, 4 pole pairs.
inline pmsm::MachineParameters nominal_machine()
{
    return pmsm::MachineParameters::balanced(0.1, 1.5e-4, 5e-5, 0.05, 4);
}

inline pmsm::Triple random_deviation(std::mt19937_64& rng, double nominal, double max_fraction = 0.2)
{
    std::uniform_real_distribution<double> u(0.0, max_fraction * nominal);
    pmsm::Triple t{u(rng), u(rng), u(rng)};
    const double lo = std::min({t[0], t[1], t[2]});
    for (auto& x : t)
        x -= lo;
    return t;
}

inline pmsm::OperatingPoint random_operating_point(std::mt19937_64& rng, double rated_current = 10.0,
                                                   double max_omega = 1000.0)
{
    std::uniform_real_distribution<double> cur(-rated_current, rated_current);
    std::uniform_real_distribution<double> rate(-1000.0, 1000.0);
    std::uniform_real_distribution<double> omega(0.0, max_omega);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    pmsm::OperatingPoint op;
    op.theta = angle(rng);
    op.omega_e = omega(rng);
    op.i_d = cur(rng);
    op.i_q = cur(rng);
    op.di_d = rate(rng);
    op.di_q = rate(rng);
    return op;
}

} // namespace oracle
