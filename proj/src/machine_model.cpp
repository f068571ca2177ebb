#include "pmsm/machine_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pmsm/errors.hpp"

namespace pmsm {

namespace {

Eigen::Matrix3d inductance_matrix(const MachineParameters& p)
{
    Eigen::Matrix3d l;
    l << p.l_a, -p.m_ab, -p.m_ca,
        -p.m_ab, p.l_b, -p.m_bc,
        -p.m_ca, -p.m_bc, p.l_c;
    return l;
}

void require(bool ok, const char* field, const std::string& what)
{
    if (!ok)
        throw ParameterError(std::string(field) + " " + what);
}

double min_of(const Triple& t) { return std::min({t[0], t[1], t[2]}); }

// value - nominal, nudged by an ulp when that makes nominal + deviation == value.
// The plain difference is already exact when value <= 2 nominal.
double exact_deviation(double value, double nominal)
{
    const double d = value - nominal;
    if (nominal + d == value)
        return d;
    for (double candidate : {std::nextafter(d, HUGE_VAL), std::nextafter(d, -HUGE_VAL)})
        if (nominal + candidate == value)
            return candidate;
    return d;
}

Triple deviations(const Triple& t, double nominal)
{
    return {exact_deviation(t[0], nominal), exact_deviation(t[1], nominal), exact_deviation(t[2], nominal)};
}

} // namespace

MachineParameters MachineParameters::balanced(double r, double l, double m, double lam, int pole_pairs)
{
    MachineParameters p;
    p.r_a = p.r_b = p.r_c = r;
    p.l_a = p.l_b = p.l_c = l;
    p.m_ab = p.m_bc = p.m_ca = m;
    p.lam_a = p.lam_b = p.lam_c = lam;
    p.pole_pairs = pole_pairs;
    return p;
}

bool MachineParameters::inductance_positive_definite() const
{
    Eigen::LLT<Eigen::Matrix3d> llt(inductance_matrix(*this));
    return llt.info() == Eigen::Success;
}

void MachineParameters::validate() const
{
    const struct {
        const char* name;
        double value;
    } positive[] = {{"r_a", r_a}, {"r_b", r_b}, {"r_c", r_c}, {"l_a", l_a}, {"l_b", l_b}, {"l_c", l_c}};
    for (const auto& f : positive)
        require(std::isfinite(f.value) && f.value > 0.0, f.name, "must be positive and finite");
    const struct {
        const char* name;
        double value;
    } others[] = {{"m_ab", m_ab}, {"m_bc", m_bc}, {"m_ca", m_ca}};
    for (const auto& f : others)
        require(std::isfinite(f.value), f.name, "must be finite");
    const struct {
        const char* name;
        double value;
    } fluxes[] = {{"lam_a", lam_a}, {"lam_b", lam_b}, {"lam_c", lam_c}};
    for (const auto& f : fluxes)
        require(std::isfinite(f.value) && f.value >= 0.0, f.name, "must be non-negative and finite");
    require(pole_pairs > 0, "pole_pairs", "must be a positive integer");
    require(beta == kPhaseShift, "beta", "must equal 2*pi/3 for a three-phase machine");
}

MachineParameters ImbalanceDecomposition::reconstruct() const
{
    MachineParameters p;
    p.r_a = nominal_r + d_r[0];
    p.r_b = nominal_r + d_r[1];
    p.r_c = nominal_r + d_r[2];
    p.l_a = nominal_l + d_l[0];
    p.l_b = nominal_l + d_l[1];
    p.l_c = nominal_l + d_l[2];
    p.m_ab = nominal_m + d_m[0];
    p.m_bc = nominal_m + d_m[1];
    p.m_ca = nominal_m + d_m[2];
    p.lam_a = nominal_lam + d_lam[0];
    p.lam_b = nominal_lam + d_lam[1];
    p.lam_c = nominal_lam + d_lam[2];
    p.pole_pairs = pole_pairs;
    return p;
}

bool ImbalanceDecomposition::balanced() const
{
    const auto zero = [](const Triple& t) { return t[0] == 0.0 && t[1] == 0.0 && t[2] == 0.0; };
    return zero(d_r) && zero(d_l) && zero(d_m) && zero(d_lam);
}

ImbalanceDecomposition decompose(const MachineParameters& params)
{
    ImbalanceDecomposition dec;
    dec.nominal_r = min_of(params.resistances());
    dec.nominal_l = min_of(params.self_inductances());
    dec.nominal_m = min_of(params.mutual_inductances());
    dec.nominal_lam = min_of(params.flux_linkages());
    dec.d_r = deviations(params.resistances(), dec.nominal_r);
    dec.d_l = deviations(params.self_inductances(), dec.nominal_l);
    dec.d_m = deviations(params.mutual_inductances(), dec.nominal_m);
    dec.d_lam = deviations(params.flux_linkages(), dec.nominal_lam);
    dec.pole_pairs = params.pole_pairs;
    return dec;
}

AbcVector flux_linkages(const MachineParameters& p, const AbcVector& i, double theta)
{
    return {
        p.l_a * i.a - p.m_ab * i.b - p.m_ca * i.c - p.lam_a * std::cos(theta),
        p.l_b * i.b - p.m_ab * i.a - p.m_bc * i.c - p.lam_b * std::cos(theta - p.beta),
        p.l_c * i.c - p.m_ca * i.a - p.m_bc * i.b - p.lam_c * std::cos(theta - 2.0 * p.beta),
    };
}

AbcVector phase_voltages(const MachineParameters& p, const AbcVector& i, const AbcVector& di, double theta,
                         double omega_e)
{
    // Inductive part: the flux model evaluated on di with the magnets removed.
    const AbcVector inductive{
        p.l_a * di.a - p.m_ab * di.b - p.m_ca * di.c,
        p.l_b * di.b - p.m_ab * di.a - p.m_bc * di.c,
        p.l_c * di.c - p.m_ca * di.a - p.m_bc * di.b,
    };
    const AbcVector back_emf{
        omega_e * p.lam_a * std::sin(theta),
        omega_e * p.lam_b * std::sin(theta - p.beta),
        omega_e * p.lam_c * std::sin(theta - 2.0 * p.beta),
    };
    const AbcVector resistive{p.r_a * i.a, p.r_b * i.b, p.r_c * i.c};
    return resistive + inductive + back_emf;
}

double torque_abc(const MachineParameters& p, const AbcVector& i, double theta)
{
    const double electrical = p.lam_a * i.a * std::sin(theta) + p.lam_b * i.b * std::sin(theta - p.beta) +
                              p.lam_c * i.c * std::sin(theta - 2.0 * p.beta);
    return p.pole_pairs * electrical;
}

double coenergy(const MachineParameters& p, const AbcVector& i, double theta)
{
    // Inductive part is 1/2 i^T L i; the magnet flux is constant in i.
    const Eigen::Vector3d current(i.a, i.b, i.c);
    const double stored = 0.5 * current.dot(inductance_matrix(p) * current);
    const double magnet = -(p.lam_a * i.a * std::cos(theta) + p.lam_b * i.b * std::cos(theta - p.beta) +
                            p.lam_c * i.c * std::cos(theta - 2.0 * p.beta));
    return stored + magnet;
}

NonSalientNominal nonsalient_nominal(const ImbalanceDecomposition& dec)
{
    return {dec.nominal_r, dec.nominal_l + dec.nominal_m, dec.nominal_lam, dec.pole_pairs};
}

DqOutput ideal_dq_nonsalient(const NonSalientNominal& n, const OperatingPoint& op)
{
    DqOutput out;
    out.v_d = n.r * op.i_d + n.l_sync * (op.di_d + op.omega_e * op.i_q);
    out.v_q = n.r * op.i_q + n.l_sync * (op.di_q - op.omega_e * op.i_d) + op.omega_e * n.lam;
    out.torque = 1.5 * n.pole_pairs * n.lam * op.i_q;
    return out;
}

DqOutput ideal_dq_salient(const SalientNominal& n, const OperatingPoint& op)
{
    DqOutput out;
    out.v_d = n.r * op.i_d + op.omega_e * n.l_q * op.i_q + n.l_d * op.di_d;
    out.v_q = n.r * op.i_q - op.omega_e * n.l_d * op.i_d + n.l_q * op.di_q + op.omega_e * n.lam;
    out.torque = 1.5 * n.pole_pairs * (n.lam + (n.l_q - n.l_d) * op.i_d) * op.i_q;
    return out;
}

} // namespace pmsm
