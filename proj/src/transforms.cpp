#include "pmsm/transforms.hpp"

#include <cmath>

namespace pmsm {

namespace {

struct PhaseAngles {
    double cos[3];
    double sin[3];
};

PhaseAngles phase_angles(double theta)
{
    PhaseAngles p{};
    for (int k = 0; k < 3; ++k) {
        const double angle = theta - k * kPhaseShift;
        p.cos[k] = std::cos(angle);
        p.sin[k] = std::sin(angle);
    }
    return p;
}

} // namespace

Dq0Vector park_forward(const AbcVector& h, double theta)
{
    const auto p = phase_angles(theta);
    const double x[3] = {h.a, h.b, h.c};
    Dq0Vector out;
    for (int k = 0; k < 3; ++k) {
        out.d += p.cos[k] * x[k];
        out.q += p.sin[k] * x[k];
        out.zero += 0.5 * x[k];
    }
    constexpr double scale = 2.0 / 3.0;
    return scale * out;
}

AbcVector park_inverse(const Dq0Vector& h, double theta)
{
    const auto p = phase_angles(theta);
    return {
        h.d * p.cos[0] + h.q * p.sin[0] + h.zero,
        h.d * p.cos[1] + h.q * p.sin[1] + h.zero,
        h.d * p.cos[2] + h.q * p.sin[2] + h.zero,
    };
}

AbcVector park_inverse_rate(const Dq0Vector& h, const Dq0Vector& dh, double theta, double omega_e)
{
    // d/dt [cos, sin] = omega * [-sin, cos], so the rotation folds into an
    // equivalent dq rate (dh_d + omega h_q, dh_q - omega h_d).
    const Dq0Vector equivalent{dh.d + omega_e * h.q, dh.q - omega_e * h.d, dh.zero};
    return park_inverse(equivalent, theta);
}

} // namespace pmsm
