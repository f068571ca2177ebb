#pragma once

#include <cstddef>
#include <string_view>

#include "pmsm/machine_model.hpp"
#include "pmsm/time_series.hpp"

namespace pmsm {

enum class SimMode { CurrentFed, VoltageFed };
enum class Neutral { Isolated, Driven };

std::string_view to_string(SimMode mode);
std::string_view to_string(Neutral neutral);

struct SimConfig {
    double dt = 1e-6;      // s
    double duration = 0.2; // s
    SimMode mode = SimMode::CurrentFed;
    Neutral neutral = Neutral::Isolated;
    std::size_t record_stride = 1; // keep every n-th step

    /// Minimum steps per electrical period at the commanded speed.
    static constexpr double kMinStepsPerPeriod = 200.0;

    /// Throws ConfigError when dt, duration or resolution are inconsistent.
    void validate(double omega_e) const;

    std::size_t steps() const;
};

/// Channel names written by both simulation modes, in column order.
inline constexpr std::string_view kSimChannels[] = {"v_a", "v_b", "v_c", "i_a", "i_b", "i_c", "v_d",
                                                    "v_q", "v_0", "i_d", "i_q", "i_0", "t_e"};

/**
 * @brief Exact abc-frame evaluation under prescribed dq0 currents.
 *
 * theta = omega_e t, i_abc = park_inverse(i_cmd, theta) and its analytic time
 * derivative; voltages and torque follow from the per-phase model. No
 * integration is involved. A nonzero zero-sequence command is honoured.
 */
TimeSeries run_current_fed(const MachineParameters& params, const Dq0Vector& i_cmd, double omega_e,
                           const SimConfig& cfg);

/**
 * @brief Fixed-step RK4 integration of the voltage-fed machine from rest.
 *
 * Applied voltages are park_inverse(v_cmd, theta). With an isolated neutral the
 * state is (i_a, i_b), i_c = -i_a - i_b, and the neutral-point voltage is solved
 * at every stage; recorded v_abc are winding voltages. With a driven neutral the
 * three currents are independent.
 *
 * Throws ParameterError when the inductance matrix is not positive definite and
 * IntegrationError on non-finite or diverging state.
 */
TimeSeries run_voltage_fed(const MachineParameters& params, const Dq0Vector& v_cmd, double omega_e,
                           const SimConfig& cfg);

/// Start of the steady-state window: max(5 (L+M)/R, 2 electrical periods), nominal values.
double transient_discard_time(const MachineParameters& params, double omega_e);

} // namespace pmsm
