#pragma once

#include <complex>

#include "pmsm/machine_model.hpp"

namespace pmsm {

/**
 * @brief Magnitude and phase of a k cos(2 theta + phi) component.
 *
 * phi lies in (-pi, pi]; it is forced to 0 when k is negligible against the
 * scale of the inputs it was computed from.
 */
struct SecondHarmonicPhasor {
    double k = 0.0;
    double phi = 0.0;

    std::complex<double> complex() const { return std::polar(k, phi); }
};

/// dq-axis voltage contribution of one imbalance family.
struct DqVoltageDelta {
    double dv_d = 0.0;
    double dv_q = 0.0;

    friend DqVoltageDelta operator+(DqVoltageDelta x, DqVoltageDelta y) { return {x.dv_d + y.dv_d, x.dv_q + y.dv_q}; }
};

struct DqVoltage {
    double v_d = 0.0;
    double v_q = 0.0;
};

/**
 * Phasor of a per-phase deviation triple (a, b, c).
 *
 * K = 1/3 sqrt(a^2 + b^2 + c^2 - ab - bc - ca),
 * phi = atan2(sqrt(3) (b - c), 2a - b - c).
 * A deviation confined to phase b leads phase a by 2 pi / 3.
 */
SecondHarmonicPhasor resistance_coeffs(const Triple& d_r);

/// Same algebra as resistance_coeffs, applied to magnet flux deviations.
SecondHarmonicPhasor flux_coeffs(const Triple& d_lam);

struct InductancePhasors {
    SecondHarmonicPhasor self;
    SecondHarmonicPhasor mutual;
};

/**
 * Self phasor uses the resistance algebra. The mutual phasor, from deviations
 * ordered (ab, bc, ca), is K_M = 2/3 sqrt(sum^2 - cross) and
 * phi_M = atan2(sqrt(3) (ca - ab), 2 bc - ab - ca).
 */
InductancePhasors inductance_coeffs(const Triple& d_l, const Triple& d_m);

/**
 * Resistance imbalance voltage in the dq frame, S = sum of d_r:
 *   dv_d = S/3 i_d + K cos(2t + phi) i_d + K sin(2t + phi) i_q + 2K cos(t - phi) i_0
 *   dv_q = S/3 i_q + K sin(2t + phi) i_d - K cos(2t + phi) i_q + 2K sin(t - phi) i_0
 */
DqVoltageDelta resistance_delta(const Triple& d_r, const OperatingPoint& op);

/**
 * Magnet flux imbalance voltage:
 *   dv_d = w K sin(2t + phi)
 *   dv_q = w S/3 - w K cos(2t + phi)
 */
DqVoltageDelta flux_delta(const Triple& d_lam, double omega_e, double theta);

/**
 * Inductance imbalance voltage for a non-salient machine. With
 * u_d = di_d + w i_q and u_q = di_q - w i_d:
 *   dv_d = (D + K_L cos(2t+phi_L) - K_M cos(2t+phi_M)) u_d + (K_L sin(2t+phi_L) - K_M sin(2t+phi_M)) u_q
 *   dv_q = (K_L sin(2t+phi_L) - K_M sin(2t+phi_M)) u_d + (D - K_L cos(2t+phi_L) + K_M cos(2t+phi_M)) u_q
 * where D = (sum d_l + sum d_m) / 3, plus first-harmonic coupling to di_0.
 */
DqVoltageDelta inductance_delta(const Triple& d_l, const Triple& d_m, const OperatingPoint& op);

DqVoltage compose_total(const DqVoltage& ideal, const DqVoltageDelta& d_res, const DqVoltageDelta& d_flux,
                        const DqVoltageDelta& d_ind);

/// Ideal non-salient voltages plus all three imbalance contributions.
DqVoltage analytic_dq_voltages(const ImbalanceDecomposition& dec, const OperatingPoint& op);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

} // namespace pmsm
