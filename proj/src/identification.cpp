#include "pmsm/identification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "pmsm/errors.hpp"

namespace pmsm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_samples(std::span<const double> dv_d, std::span<const double> dv_q, std::span<const double> theta)
{
    if (dv_d.size() != theta.size() || dv_q.size() != theta.size())
        throw InputError("identification: dv_d, dv_q and theta must have equal lengths");
    if (theta.size() < 2)
        throw InputError("identification: need at least two samples");
    const double step = std::abs(theta.back() - theta.front()) / static_cast<double>(theta.size() - 1);
    if (std::abs(theta.back() - theta.front()) + step < kTwoPi * (1.0 - 1e-9))
        throw InputError("identification: samples must cover at least one electrical period");
}

// Rows of the linear model in the unknowns (S, Re P, Im P), one per axis.
struct ModelRows {
    Eigen::Vector3d d;
    Eigen::Vector3d q;
};

template <class RowFn>
IdentificationResult fit(ImbalanceFamily family, std::span<const double> dv_d, std::span<const double> dv_q,
                         std::span<const double> theta, RowFn rows)
{
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t n = 0; n < theta.size(); ++n) {
        const ModelRows r = rows(theta[n]);
        normal.noalias() += r.d * r.d.transpose() + r.q * r.q.transpose();
        rhs.noalias() += r.d * dv_d[n] + r.q * dv_q[n];
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    if (!(ev(2) > 0.0) || ev(0) < 1e-10 * ev(2))
        throw IdentifiabilityError(std::string("identification: ") + std::string(to_string(family)) +
                                   " model is rank deficient for this operating point");
    const Eigen::Vector3d x = normal.ldlt().solve(rhs);

    double sq = 0.0;
    for (std::size_t n = 0; n < theta.size(); ++n) {
        const ModelRows r = rows(theta[n]);
        const double ed = dv_d[n] - r.d.dot(x);
        const double eq = dv_q[n] - r.q.dot(x);
        sq += ed * ed + eq * eq;
    }

    IdentificationResult out;
    out.family = family;
    out.s = x(0);
    const double scale = std::max({std::abs(x(0)), std::abs(x(1)), std::abs(x(2))});
    const double k = std::hypot(x(1), x(2));
    out.phasor = k <= 1e-15 * scale ? SecondHarmonicPhasor{k, 0.0}
                                    : SecondHarmonicPhasor{k, wrap_angle(std::atan2(x(2), x(1)))};
    const auto dev = invert_phasor(out.s, out.phasor);
    out.raw = dev.raw;
    out.per_phase = dev.per_phase;
    out.nominal_shift = dev.shift;
    out.fit_residual_rms = std::sqrt(sq / static_cast<double>(2 * theta.size()));
    return out;
}

} // namespace

std::string_view to_string(ImbalanceFamily family)
{
    return family == ImbalanceFamily::Resistance ? "resistance" : "flux";
}

PhaseDeviations invert_phasor(double s, const SecondHarmonicPhasor& phasor)
{
    const double re = phasor.k * std::cos(phasor.phi);
    const double im = phasor.k * std::sin(phasor.phi);
    const double mean = s / 3.0;
    PhaseDeviations out;
    out.raw = {mean + 2.0 * re, mean - re + std::numbers::sqrt3 * im, mean - re - std::numbers::sqrt3 * im};
    out.shift = std::min({out.raw[0], out.raw[1], out.raw[2]});
    for (std::size_t x = 0; x < 3; ++x)
        out.per_phase[x] = out.raw[x] - out.shift;
    return out;
}

IdentificationResult fit_resistance(std::span<const double> dv_d, std::span<const double> dv_q, double i_d,
                                    double i_q, std::span<const double> theta)
{
    check_samples(dv_d, dv_q, theta);
    if (i_d == 0.0 && i_q == 0.0)
        throw IdentifiabilityError("identification: resistance imbalance is invisible at zero current");
    // K cos(2t+phi) = Re c2 - Im s2, K sin(2t+phi) = Re s2 + Im c2.
    return fit(ImbalanceFamily::Resistance, dv_d, dv_q, theta, [&](double t) {
        const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
        return ModelRows{
            {i_d / 3.0, i_d * c2 + i_q * s2, -i_d * s2 + i_q * c2},
            {i_q / 3.0, i_d * s2 - i_q * c2, i_d * c2 + i_q * s2},
        };
    });
}

IdentificationResult fit_flux(std::span<const double> dv_d, std::span<const double> dv_q, double omega_e,
                              std::span<const double> theta)
{
    check_samples(dv_d, dv_q, theta);
    if (omega_e == 0.0)
        throw IdentifiabilityError("identification: flux imbalance is invisible at standstill (omega_e = 0)");
    return fit(ImbalanceFamily::Flux, dv_d, dv_q, theta, [&](double t) {
        const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
        return ModelRows{
            {0.0, omega_e * s2, omega_e * c2},
            {omega_e / 3.0, -omega_e * c2, omega_e * s2},
        };
    });
}

} // namespace pmsm
