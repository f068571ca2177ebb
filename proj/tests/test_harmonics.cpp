#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pmsm/errors.hpp"
#include "pmsm/harmonics.hpp"

using namespace pmsm;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> angles(std::size_t n, double periods = 1.0, double start = 0.3)
{
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k)
        t[k] = start + 2.0 * kPi * periods * static_cast<double>(k) / static_cast<double>(n);
    return t;
}

template <class F>
std::vector<double> sample(const std::vector<double>& theta, F f)
{
    std::vector<double> out;
    for (double t : theta)
        out.push_back(f(t));
    return out;
}

} // namespace

TEST_CASE("demodulate: constant signal")
{
    const auto theta = angles(128);
    const auto h = demodulate(sample(theta, [](double) { return 2.5; }), theta);
    CHECK(h.dc == Approx(2.5).epsilon(1e-14));
    CHECK(h.second.k < 1e-13);
    CHECK(h.second.phi == 0.0);
    CHECK(h.residual_rms < 1e-14);
}

TEST_CASE("demodulate: basis member")
{
    const auto theta = angles(256, 1.0);
    const auto h = demodulate(sample(theta, [](double t) { return 3.0 * std::cos(2.0 * t + kPi / 4.0); }), theta);
    CHECK(std::abs(h.dc) < 1e-10);
    CHECK(h.second.k == Approx(3.0).epsilon(1e-10));
    CHECK(h.second.phi == Approx(kPi / 4.0).epsilon(1e-10));
    CHECK(h.residual_rms < 1e-12);
}

TEST_CASE("demodulate is exact on the span for non-integer windows")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 0; n < 50; ++n) {
        const double dc = u(rng), k = std::abs(u(rng)) + 0.1, phi = u(rng);
        const auto theta = angles(300 + n, 1.37 + 0.05 * n, u(rng));
        const auto signal = sample(theta, [&](double t) { return dc + k * std::cos(2.0 * t + phi); });
        const auto h = demodulate(signal, theta);
        CHECK(h.dc == Approx(dc).epsilon(1e-10));
        CHECK(h.second.k == Approx(k).epsilon(1e-10));
        CHECK(std::abs(wrap_angle(h.second.phi - phi)) < 1e-10);
        CHECK(h.residual_rms < 1e-12);

        // Scaling moves dc and k, never phi.
        std::vector<double> scaled(signal);
        for (auto& v : scaled)
            v *= 4.0;
        const auto hs = demodulate(scaled, theta);
        CHECK(hs.dc == Approx(4.0 * dc).epsilon(1e-10));
        CHECK(hs.second.k == Approx(4.0 * k).epsilon(1e-10));
        CHECK(std::abs(wrap_angle(hs.second.phi - phi)) < 1e-10);
    }
}

TEST_CASE("demodulate reports residual of out-of-model content")
{
    const auto theta = angles(512, 2.0);
    const auto h = demodulate(sample(theta, [](double t) { return 1.0 + std::cos(4.0 * t); }), theta);
    CHECK(h.dc == Approx(1.0).epsilon(1e-10));
    CHECK(h.second.k < 1e-10);
    CHECK(h.residual_rms == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("demodulate: input errors")
{
    const auto theta = angles(128, 0.5);
    const std::vector<double> signal(theta.size(), 1.0);
    CHECK_THROWS_AS(demodulate(signal, theta), InputError);
    const auto sparse = angles(40);
    CHECK_THROWS_AS(demodulate(std::vector<double>(40, 1.0), sparse), InputError);
    const auto few_per_period = angles(100, 3.0);
    CHECK_THROWS_AS(demodulate(std::vector<double>(100, 1.0), few_per_period), InputError);
    CHECK_THROWS_AS(demodulate(std::vector<double>(10, 1.0), angles(128)), InputError);
}

TEST_CASE("demodulate recovers the resistance phasor")
{
    const Triple d_r{0.03, 0.01, 0.02};
    const auto theta = angles(720);
    const auto dv_q = sample(theta, [&](double t) {
        OperatingPoint op;
        op.theta = t;
        op.i_q = 10.0;
        return resistance_delta(d_r, op).dv_q;
    });
    const auto h = demodulate(dv_q, theta);
    const auto coeffs = resistance_coeffs(d_r);
    CHECK(h.second.k == Approx(10.0 * coeffs.k).epsilon(1e-10));
    CHECK(h.second.k == Approx(0.0577350269189626).epsilon(1e-10));
    // q axis carries -K cos(2 theta + phi) for i_q excitation.
    CHECK(std::abs(wrap_angle(h.second.phi - (coeffs.phi + kPi))) < 1e-10);
    CHECK(h.dc == Approx(0.06 / 3.0 * 10.0).epsilon(1e-10));
}

TEST_CASE("demodulated resistance phasor tracks the coefficients for random triples")
{
    std::mt19937_64 rng(32);
    const auto theta = angles(256);
    for (int n = 0; n < 100; ++n) {
        const auto d = oracle::random_deviation(rng, 0.1);
        const double i_d = 7.0;
        const auto dv_d = sample(theta, [&](double t) {
            OperatingPoint op;
            op.theta = t;
            op.i_d = i_d;
            return resistance_delta(d, op).dv_d;
        });
        const auto h = demodulate(dv_d, theta);
        const auto c = resistance_coeffs(d);
        CHECK(h.second.k == Approx(i_d * c.k).epsilon(1e-9));
        if (c.k > 1e-9)
            CHECK(std::abs(wrap_angle(h.second.phi - c.phi)) < 1e-8);
    }
}

TEST_CASE("compare_waveforms")
{
    const std::vector<double> a{1.0, -1.0, 1.0, -1.0};
    auto e = compare_waveforms(a, a);
    CHECK(e.max_abs_error == 0.0);
    CHECK(e.rms_error == 0.0);
    REQUIRE(e.relative_rms);
    CHECK(*e.relative_rms == 0.0);

    std::vector<double> b(a);
    for (auto& v : b)
        v += 0.001;
    e = compare_waveforms(a, b);
    CHECK(e.max_abs_error == Approx(0.001).epsilon(1e-12));
    CHECK(*e.relative_rms == Approx(0.001).epsilon(1e-12));

    e = compare_waveforms(std::vector<double>(3, 0.0), std::vector<double>(3, 1.0));
    CHECK_FALSE(e.relative_rms);
    CHECK(e.max_abs_error == 1.0);

    CHECK_THROWS_AS(compare_waveforms(a, std::vector<double>(3, 0.0)), InputError);
}

TEST_CASE("first-order ripple of a positive-sequence disturbance")
{
    // dv = A e^{j(2t + psi)}: d axis k cos(2t + psi), q axis k sin(2t + psi) = k cos(2t + psi - pi/2).
    const double r = 0.1, l = 2e-4, w = 500.0, k = 0.02, psi = 0.4;
    const auto ripple = first_order_current_ripple({k, psi}, {k, psi - kPi / 2.0}, r, l, w);
    const double expected = k / std::hypot(r, w * l);
    CHECK(ripple.d.k == Approx(expected).epsilon(1e-12));
    CHECK(ripple.q.k == Approx(expected).epsilon(1e-12));
    const double z_angle = std::atan2(w * l, r);
    CHECK(std::abs(wrap_angle(ripple.d.phi - (psi + kPi - z_angle))) < 1e-12);
}
