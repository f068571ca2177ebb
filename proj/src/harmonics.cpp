#include "pmsm/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pmsm/errors.hpp"

namespace pmsm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinSamplesPerPeriod = 64;

SecondHarmonicPhasor from_complex(std::complex<double> z, double scale)
{
    const double k = std::abs(z);
    if (k < 1e-12 * scale)
        return {k, 0.0};
    return {k, wrap_angle(std::arg(z))};
}

} // namespace

HarmonicDecomposition demodulate(std::span<const double> signal, std::span<const double> theta)
{
    if (signal.size() != theta.size())
        throw InputError("demodulate: signal and theta lengths differ (" + std::to_string(signal.size()) + " vs " +
                         std::to_string(theta.size()) + ")");
    if (signal.size() < kMinSamplesPerPeriod)
        throw InputError("demodulate: need at least " + std::to_string(kMinSamplesPerPeriod) + " samples");

    const double step = std::abs(theta.back() - theta.front()) / static_cast<double>(theta.size() - 1);
    const double coverage = std::abs(theta.back() - theta.front()) + step;
    if (!(coverage >= kTwoPi * (1.0 - 1e-9)))
        throw InputError("demodulate: samples cover " + std::to_string(coverage / kTwoPi) +
                         " electrical periods, need at least 1");
    const double per_period = static_cast<double>(theta.size()) * kTwoPi / coverage;
    if (per_period < static_cast<double>(kMinSamplesPerPeriod) * (1.0 - 1e-9))
        throw InputError("demodulate: " + std::to_string(per_period) + " samples per period, need at least " +
                         std::to_string(kMinSamplesPerPeriod));

    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    double scale = 0.0;
    for (std::size_t n = 0; n < signal.size(); ++n) {
        const Eigen::Vector3d basis(1.0, std::cos(2.0 * theta[n]), std::sin(2.0 * theta[n]));
        normal.noalias() += basis * basis.transpose();
        rhs.noalias() += basis * signal[n];
        scale = std::max(scale, std::abs(signal[n]));
    }
    const Eigen::Vector3d coef = normal.ldlt().solve(rhs);

    // b cos + c sin = k cos(2theta + phi) with k cos phi = b, k sin phi = -c.
    HarmonicDecomposition out;
    out.dc = coef(0);
    out.second = from_complex({coef(1), -coef(2)}, scale);

    double sq = 0.0;
    for (std::size_t n = 0; n < signal.size(); ++n) {
        const double fit = coef(0) + coef(1) * std::cos(2.0 * theta[n]) + coef(2) * std::sin(2.0 * theta[n]);
        sq += (signal[n] - fit) * (signal[n] - fit);
    }
    out.residual_rms = std::sqrt(sq / static_cast<double>(signal.size()));
    return out;
}

WaveformError compare_waveforms(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InputError("compare_waveforms: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    WaveformError e;
    if (a.empty())
        return e;
    double sq_err = 0.0, sq_ref = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const double diff = b[n] - a[n];
        e.max_abs_error = std::max(e.max_abs_error, std::abs(diff));
        sq_err += diff * diff;
        sq_ref += a[n] * a[n];
    }
    const auto count = static_cast<double>(a.size());
    e.rms_error = std::sqrt(sq_err / count);
    const double ref_rms = std::sqrt(sq_ref / count);
    if (ref_rms > 0.0)
        e.relative_rms = e.rms_error / ref_rms;
    return e;
}

CurrentRipple first_order_current_ripple(const SecondHarmonicPhasor& dv_d, const SecondHarmonicPhasor& dv_q,
                                         double r, double l_sync, double omega_e)
{
    using cd = std::complex<double>;
    constexpr cd j{0.0, 1.0};
    // dv_d + j dv_q = P e^{+j2theta} + N e^{-j2theta}
    const cd d = dv_d.complex();
    const cd q = dv_q.complex();
    const cd positive = 0.5 * (d + j * q);
    const cd negative = 0.5 * (std::conj(d) + j * std::conj(q));

    const cd z_positive = r + j * (2.0 * omega_e - omega_e) * l_sync;
    const cd z_negative = r + j * (-2.0 * omega_e - omega_e) * l_sync;
    const cd i_positive = -positive / z_positive;
    const cd i_negative = -negative / z_negative;

    // Back to per-axis phasors: i_d = Re(.), i_q = Im(.) of the rotating pair.
    const cd i_d = i_positive + std::conj(i_negative);
    const cd i_q = -j * (i_positive - std::conj(i_negative));
    const double scale = std::abs(i_d) + std::abs(i_q);
    return {from_complex(i_d, scale), from_complex(i_q, scale)};
}

} // namespace pmsm
