#pragma once

#include <complex>
#include <optional>
#include <span>

#include "pmsm/imbalance_analytics.hpp"

namespace pmsm {

struct HarmonicDecomposition {
    double dc = 0.0;
    SecondHarmonicPhasor second; // signal ~ dc + k cos(2 theta + phi)
    double residual_rms = 0.0;
};

/**
 * @brief Synchronous demodulation against the sampled electrical angle.
 *
 * Least-squares projection of the signal onto {1, cos 2theta, sin 2theta}.
 * theta must be unwrapped and cover at least one electrical period with 64 or
 * more samples per period; otherwise InputError is thrown.
 */
HarmonicDecomposition demodulate(std::span<const double> signal, std::span<const double> theta);

struct WaveformError {
    double max_abs_error = 0.0;
    double rms_error = 0.0;
    std::optional<double> relative_rms; // absent when the reference has zero RMS
};

/// Error metrics of b against reference a.
WaveformError compare_waveforms(std::span<const double> a, std::span<const double> b);

/// Second-harmonic content of a current pair in the dq frame.
struct CurrentRipple {
    SecondHarmonicPhasor d;
    SecondHarmonicPhasor q;
};

/**
 * First-order current ripple of a non-salient machine driven by a 2 theta
 * voltage disturbance at constant speed. The dq voltage pair is split into
 * positive (e^{+j2theta}) and negative sequence parts, each divided by the
 * complex dq impedance R + j(s - w)L evaluated at s = +-2w, and the sign is
 * flipped since the disturbance opposes the applied voltage.
 */
CurrentRipple first_order_current_ripple(const SecondHarmonicPhasor& dv_d, const SecondHarmonicPhasor& dv_q,
                                         double r, double l_sync, double omega_e);

} // namespace pmsm
