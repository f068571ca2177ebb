#include "pmsm/reference_sim.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include "pmsm/errors.hpp"

namespace pmsm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDivergedCurrent = 1e9; // A

class Recorder {
public:
    explicit Recorder(std::size_t capacity)
    {
        t_.reserve(capacity);
        theta_.reserve(capacity);
        for (auto& c : columns_)
            c.reserve(capacity);
    }

    void push(const MachineParameters& params, double t, double theta, const AbcVector& v, const AbcVector& i)
    {
        const auto v_dq = park_forward(v, theta);
        const auto i_dq = park_forward(i, theta);
        const double row[] = {v.a,      v.b,      v.c,       i.a,      i.b,      i.c,
                              v_dq.d,   v_dq.q,   v_dq.zero, i_dq.d,   i_dq.q,   i_dq.zero,
                              torque_abc(params, i, theta)};
        t_.push_back(t);
        theta_.push_back(theta);
        for (std::size_t k = 0; k < columns_.size(); ++k)
            columns_[k].push_back(row[k]);
    }

    TimeSeries finish()
    {
        TimeSeries ts(std::move(t_), std::move(theta_));
        for (std::size_t k = 0; k < columns_.size(); ++k)
            ts.add_channel(std::string(kSimChannels[k]), std::move(columns_[k]));
        return ts;
    }

private:
    std::vector<double> t_;
    std::vector<double> theta_;
    std::array<std::vector<double>, std::size(kSimChannels)> columns_;
};

Eigen::Matrix3d inductance_matrix(const MachineParameters& p)
{
    Eigen::Matrix3d l;
    l << p.l_a, -p.m_ab, -p.m_ca,
        -p.m_ab, p.l_b, -p.m_bc,
        -p.m_ca, -p.m_bc, p.l_c;
    return l;
}

Eigen::Vector3d to_eigen(const AbcVector& v) { return {v.a, v.b, v.c}; }
AbcVector to_abc(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

// Right-hand side of L di/dt = v - R i - e(theta), with the neutral constraint.
class VoltageFedMachine {
public:
    VoltageFedMachine(const MachineParameters& params, const Dq0Vector& v_cmd, double omega_e, Neutral neutral)
        : params_(params), v_cmd_(v_cmd), omega_(omega_e), isolated_(neutral == Neutral::Isolated)
    {
        Eigen::LLT<Eigen::Matrix3d> llt(inductance_matrix(params));
        if (llt.info() != Eigen::Success)
            throw ParameterError("inductance matrix is not positive definite");
        l_inv_ = llt.solve(Eigen::Matrix3d::Identity());
        g_ = l_inv_ * Eigen::Vector3d::Ones();
        g_sum_ = g_.sum();
    }

    AbcVector currents(const Eigen::Vector3d& state) const
    {
        if (isolated_)
            return {state(0), state(1), -state(0) - state(1)};
        return to_abc(state);
    }

    /// Winding voltages (applied minus neutral) and current rates at time t.
    std::pair<AbcVector, Eigen::Vector3d> evaluate(double t, const Eigen::Vector3d& state) const
    {
        const double theta = omega_ * t;
        const AbcVector i = currents(state);
        const AbcVector applied = park_inverse(v_cmd_, theta);
        // Winding voltage with zero di: resistive drop plus back-EMF.
        const AbcVector static_part = phase_voltages(params_, i, {}, theta, omega_);
        const Eigen::Vector3d w = to_eigen(applied - static_part);
        Eigen::Vector3d di = l_inv_ * w;
        double v_neutral = 0.0;
        if (isolated_) {
            v_neutral = di.sum() / g_sum_;
            di -= g_ * v_neutral;
        }
        const AbcVector winding = applied - v_neutral * AbcVector{1.0, 1.0, 1.0};
        return {winding, di};
    }

    Eigen::Vector3d rate(double t, const Eigen::Vector3d& state) const
    {
        Eigen::Vector3d di = evaluate(t, state).second;
        if (isolated_)
            di(2) = 0.0;
        return di;
    }

private:
    MachineParameters params_;
    Dq0Vector v_cmd_;
    double omega_;
    bool isolated_;
    Eigen::Matrix3d l_inv_;
    Eigen::Vector3d g_;
    double g_sum_ = 0.0;
};

} // namespace

std::string_view to_string(SimMode mode)
{
    return mode == SimMode::CurrentFed ? "current-fed" : "voltage-fed";
}

std::string_view to_string(Neutral neutral)
{
    return neutral == Neutral::Isolated ? "isolated" : "driven";
}

void SimConfig::validate(double omega_e) const
{
    if (!(std::isfinite(dt) && dt > 0.0))
        throw ConfigError("sim.dt must be positive");
    if (!(std::isfinite(duration) && duration >= dt))
        throw ConfigError("sim.duration must be at least sim.dt");
    if (record_stride == 0)
        throw ConfigError("sim.record_stride must be at least 1");
    if (!std::isfinite(omega_e))
        throw ConfigError("operating_point.omega_e must be finite");
    if (omega_e != 0.0) {
        const double period = kTwoPi / std::abs(omega_e);
        if (dt > period / kMinStepsPerPeriod) {
            std::ostringstream msg;
            msg << "sim.dt = " << dt << " s exceeds electrical period / " << kMinStepsPerPeriod << " = "
                << period / kMinStepsPerPeriod << " s";
            throw ConfigError(msg.str());
        }
    }
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

TimeSeries run_current_fed(const MachineParameters& params, const Dq0Vector& i_cmd, double omega_e,
                           const SimConfig& cfg)
{
    params.validate();
    cfg.validate(omega_e);
    const std::size_t steps = cfg.steps();
    Recorder rec(steps / cfg.record_stride + 1);
    for (std::size_t k = 0; k <= steps; k += cfg.record_stride) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double theta = omega_e * t;
        const AbcVector i = park_inverse(i_cmd, theta);
        const AbcVector di = park_inverse_rate(i_cmd, {}, theta, omega_e);
        rec.push(params, t, theta, phase_voltages(params, i, di, theta, omega_e), i);
    }
    return rec.finish();
}

TimeSeries run_voltage_fed(const MachineParameters& params, const Dq0Vector& v_cmd, double omega_e,
                           const SimConfig& cfg)
{
    params.validate();
    cfg.validate(omega_e);
    const VoltageFedMachine machine(params, v_cmd, omega_e, cfg.neutral);

    const std::size_t steps = cfg.steps();
    const double h = cfg.dt;
    Recorder rec(steps / cfg.record_stride + 1);
    Eigen::Vector3d x = Eigen::Vector3d::Zero();

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * h;
        if (k % cfg.record_stride == 0)
            rec.push(params, t, omega_e * t, machine.evaluate(t, x).first, machine.currents(x));
        if (k == steps)
            break;

        const Eigen::Vector3d k1 = machine.rate(t, x);
        const Eigen::Vector3d k2 = machine.rate(t + 0.5 * h, x + 0.5 * h * k1);
        const Eigen::Vector3d k3 = machine.rate(t + 0.5 * h, x + 0.5 * h * k2);
        const Eigen::Vector3d k4 = machine.rate(t + h, x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kDivergedCurrent) {
            std::ostringstream msg;
            msg << "voltage-fed integration diverged at t = " << t + h << " s (step " << k + 1 << ", state ["
                << x(0) << ", " << x(1) << ", " << x(2) << "] A); reduce sim.dt";
            throw IntegrationError(msg.str());
        }
    }
    return rec.finish();
}

double transient_discard_time(const MachineParameters& params, double omega_e)
{
    const auto nominal = nonsalient_nominal(decompose(params));
    const double tau = nominal.l_sync / nominal.r;
    const double periods = omega_e != 0.0 ? 2.0 * kTwoPi / std::abs(omega_e) : 0.0;
    return std::max(5.0 * tau, periods);
}

} // namespace pmsm
