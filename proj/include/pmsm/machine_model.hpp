#pragma once

#include <array>

#include "pmsm/transforms.hpp"

namespace pmsm {

/// Three per-phase (or per-pair) values ordered a, b, c (mutuals: ab, bc, ca).
using Triple = std::array<double, 3>;

/**
 * @brief Full per-phase parameter set of a three-phase PM synchronous machine.
 *
 * Flux model: lambda_a = l_a i_a - m_ab i_b - m_ca i_c - lam_a cos(theta), and
 * cyclically for b and c with theta shifted by beta and 2 beta. Mutual inductances
 * are symmetric (m_ab couples a and b in both directions).
 */
struct MachineParameters {
    double r_a = 0.0, r_b = 0.0, r_c = 0.0;       // ohm
    double l_a = 0.0, l_b = 0.0, l_c = 0.0;       // henry
    double m_ab = 0.0, m_bc = 0.0, m_ca = 0.0;    // henry
    double lam_a = 0.0, lam_b = 0.0, lam_c = 0.0; // weber
    int pole_pairs = 1;
    double beta = kPhaseShift;

    /// Identical parameters in every phase.
    static MachineParameters balanced(double r, double l, double m, double lam, int pole_pairs);

    Triple resistances() const { return {r_a, r_b, r_c}; }
    Triple self_inductances() const { return {l_a, l_b, l_c}; }
    Triple mutual_inductances() const { return {m_ab, m_bc, m_ca}; }
    Triple flux_linkages() const { return {lam_a, lam_b, lam_c}; }

    /// Throws ParameterError naming the first offending field.
    void validate() const;

    /// True when the 3x3 inductance matrix is positive definite.
    bool inductance_positive_definite() const;
};

/// Nominal value per parameter family plus non-negative per-phase deviations.
struct ImbalanceDecomposition {
    double nominal_r = 0.0;
    double nominal_l = 0.0;
    double nominal_m = 0.0;
    double nominal_lam = 0.0;
    Triple d_r{};
    Triple d_l{};
    Triple d_m{};
    Triple d_lam{};
    int pole_pairs = 1;

    /// Rebuilds the per-phase parameter set (nominal + deviation).
    MachineParameters reconstruct() const;

    bool balanced() const;
};

/**
 * Splits each family into its minimum (nominal) and deviations from it.
 * Reconstruction is bit-exact whenever some representable deviation sums back
 * to the value, in particular whenever the value is within twice the nominal.
 */
ImbalanceDecomposition decompose(const MachineParameters& params);

/// Electrical operating point; currents and derivatives in the dq0 frame.
struct OperatingPoint {
    double theta = 0.0;   // electrical angle, rad
    double omega_e = 0.0; // electrical speed, rad/s
    double i_d = 0.0, i_q = 0.0, i_0 = 0.0;
    double di_d = 0.0, di_q = 0.0, di_0 = 0.0;

    Dq0Vector currents() const { return {i_d, i_q, i_0}; }
    Dq0Vector current_rates() const { return {di_d, di_q, di_0}; }
};

AbcVector flux_linkages(const MachineParameters& params, const AbcVector& i_abc, double theta);

/// Phase voltages R_x i_x + d(lambda_x)/dt with position-independent inductances.
AbcVector phase_voltages(const MachineParameters& params, const AbcVector& i_abc, const AbcVector& di_abc,
                         double theta, double omega_e);

/**
 * @brief Electromagnetic torque from the position derivative of co-energy.
 *
 * With constant inductances only the magnet term depends on position:
 * T = N_p * sum lam_x i_x sin(theta - k beta).
 */
double torque_abc(const MachineParameters& params, const AbcVector& i_abc, double theta);

/// Magnetic co-energy sum_x integral lambda_x di_x for linear magnetics.
double coenergy(const MachineParameters& params, const AbcVector& i_abc, double theta);

struct DqOutput {
    double v_d = 0.0;
    double v_q = 0.0;
    double torque = 0.0;
};

struct NonSalientNominal {
    double r = 0.0;
    double l_sync = 0.0; // L + M
    double lam = 0.0;
    int pole_pairs = 1;
};

struct SalientNominal {
    double r = 0.0;
    double l_d = 0.0;
    double l_q = 0.0;
    double lam = 0.0;
    int pole_pairs = 1;
};

NonSalientNominal nonsalient_nominal(const ImbalanceDecomposition& dec);

DqOutput ideal_dq_nonsalient(const NonSalientNominal& nominal, const OperatingPoint& op);

DqOutput ideal_dq_salient(const SalientNominal& nominal, const OperatingPoint& op);

} // namespace pmsm
