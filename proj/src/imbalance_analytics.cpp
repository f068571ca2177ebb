#include "pmsm/imbalance_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmsm {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kDegenerate = 1e-15;

double scale_of(const Triple& t) { return std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[2])}); }

SecondHarmonicPhasor make_phasor(double re, double im, double prefactor, double scale)
{
    SecondHarmonicPhasor p;
    p.k = prefactor * std::hypot(re, im);
    if (p.k <= kDegenerate * scale)
        return {p.k, 0.0};
    p.phi = wrap_angle(std::atan2(im, re));
    return p;
}

// Per-phase triple -> phasor of sum_x d_x exp(j (2 theta - 2 k beta)) / 3.
SecondHarmonicPhasor phase_phasor(const Triple& d)
{
    return make_phasor(2.0 * d[0] - d[1] - d[2], kSqrt3 * (d[1] - d[2]), 1.0 / 6.0, scale_of(d));
}

// 2/3 sum_x d_x cos(theta - k beta) = 2K cos(theta - phi), and the sin analogue.
DqVoltageDelta first_harmonic(const Triple& d, double theta, double weight)
{
    const auto p = phase_phasor(d);
    return {2.0 * p.k * std::cos(theta - p.phi) * weight, 2.0 * p.k * std::sin(theta - p.phi) * weight};
}

double sum(const Triple& t) { return t[0] + t[1] + t[2]; }

} // namespace

double wrap_angle(double angle)
{
    double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi)
        wrapped += 2.0 * std::numbers::pi;
    return wrapped;
}

SecondHarmonicPhasor resistance_coeffs(const Triple& d_r) { return phase_phasor(d_r); }

SecondHarmonicPhasor flux_coeffs(const Triple& d_lam) { return phase_phasor(d_lam); }

InductancePhasors inductance_coeffs(const Triple& d_l, const Triple& d_m)
{
    const double ab = d_m[0], bc = d_m[1], ca = d_m[2];
    return {phase_phasor(d_l), make_phasor(2.0 * bc - ab - ca, kSqrt3 * (ca - ab), 1.0 / 3.0, scale_of(d_m))};
}

DqVoltageDelta resistance_delta(const Triple& d_r, const OperatingPoint& op)
{
    const auto p = resistance_coeffs(d_r);
    const double dc = sum(d_r) / 3.0;
    const double c2 = p.k * std::cos(2.0 * op.theta + p.phi);
    const double s2 = p.k * std::sin(2.0 * op.theta + p.phi);
    DqVoltageDelta out{dc * op.i_d + c2 * op.i_d + s2 * op.i_q, dc * op.i_q + s2 * op.i_d - c2 * op.i_q};
    if (op.i_0 != 0.0)
        out = out + first_harmonic(d_r, op.theta, op.i_0);
    return out;
}

DqVoltageDelta flux_delta(const Triple& d_lam, double omega_e, double theta)
{
    const auto p = flux_coeffs(d_lam);
    return {omega_e * p.k * std::sin(2.0 * theta + p.phi),
            omega_e * sum(d_lam) / 3.0 - omega_e * p.k * std::cos(2.0 * theta + p.phi)};
}

DqVoltageDelta inductance_delta(const Triple& d_l, const Triple& d_m, const OperatingPoint& op)
{
    const auto [self, mutual] = inductance_coeffs(d_l, d_m);
    const double u_d = op.di_d + op.omega_e * op.i_q;
    const double u_q = op.di_q - op.omega_e * op.i_d;
    const double dc = (sum(d_l) + sum(d_m)) / 3.0;
    const double cl = self.k * std::cos(2.0 * op.theta + self.phi);
    const double sl = self.k * std::sin(2.0 * op.theta + self.phi);
    const double cm = mutual.k * std::cos(2.0 * op.theta + mutual.phi);
    const double sm = mutual.k * std::sin(2.0 * op.theta + mutual.phi);
    DqVoltageDelta out{(dc + cl - cm) * u_d + (sl - sm) * u_q, (sl - sm) * u_d + (dc - cl + cm) * u_q};
    if (op.di_0 != 0.0) {
        // Row sums of the deviation matrix: d_l[x] minus the two mutuals touching x.
        // The common part sum(d_m) drops out of the projection, leaving the pair opposite x.
        const Triple opposite{d_m[1], d_m[2], d_m[0]};
        out = out + first_harmonic(d_l, op.theta, op.di_0) + first_harmonic(opposite, op.theta, op.di_0);
    }
    return out;
}

DqVoltage compose_total(const DqVoltage& ideal, const DqVoltageDelta& d_res, const DqVoltageDelta& d_flux,
                        const DqVoltageDelta& d_ind)
{
    const auto delta = d_res + d_flux + d_ind;
    return {ideal.v_d + delta.dv_d, ideal.v_q + delta.dv_q};
}

DqVoltage analytic_dq_voltages(const ImbalanceDecomposition& dec, const OperatingPoint& op)
{
    const auto ideal = ideal_dq_nonsalient(nonsalient_nominal(dec), op);
    return compose_total({ideal.v_d, ideal.v_q}, resistance_delta(dec.d_r, op),
                         flux_delta(dec.d_lam, op.omega_e, op.theta), inductance_delta(dec.d_l, dec.d_m, op));
}

} // namespace pmsm
