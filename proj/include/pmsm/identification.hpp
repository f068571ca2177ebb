#pragma once

#include <span>
#include <string_view>

#include "pmsm/imbalance_analytics.hpp"

namespace pmsm {

enum class ImbalanceFamily { Resistance, Flux };

std::string_view to_string(ImbalanceFamily family);

struct IdentificationResult {
    ImbalanceFamily family = ImbalanceFamily::Resistance;
    double s = 0.0;               // fitted deviation sum (ohm or weber)
    SecondHarmonicPhasor phasor;  // fitted 2 theta phasor
    Triple raw{};                 // deviations relative to the model nominal
    Triple per_phase{};           // raw shifted so that the smallest is zero
    double nominal_shift = 0.0;   // min(raw); moves into the nominal value
    double fit_residual_rms = 0.0; // V
};

struct PhaseDeviations {
    Triple per_phase{}; // min-as-nominal form
    Triple raw{};       // before the shift
    double shift = 0.0; // min(raw)
};

/**
 * Inverse of (sum, coefficient phasor) -> per-phase deviations. With
 * P = k e^{j phi}: a = S/3 + 2 Re P, b = S/3 - Re P + sqrt(3) Im P,
 * c = S/3 - Re P - sqrt(3) Im P; then shifted so the minimum is zero.
 */
PhaseDeviations invert_phasor(double s, const SecondHarmonicPhasor& phasor);

/**
 * @brief Least-squares fit of resistance imbalance to dq voltage deviations.
 *
 * dv_d, dv_q are measured minus ideal voltages at constant currents (i_d, i_q)
 * with zero-sequence current absent. Throws IdentifiabilityError when both
 * currents are zero and InputError on length or coverage problems.
 */
IdentificationResult fit_resistance(std::span<const double> dv_d, std::span<const double> dv_q, double i_d,
                                    double i_q, std::span<const double> theta);

/// Least-squares fit of magnet flux imbalance; omega_e = 0 is not identifiable.
IdentificationResult fit_flux(std::span<const double> dv_d, std::span<const double> dv_q, double omega_e,
                              std::span<const double> theta);

} // namespace pmsm
