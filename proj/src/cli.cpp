#include "pmsm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmsm/csv.hpp"
#include "pmsm/errors.hpp"
#include "pmsm/harmonics.hpp"
#include "pmsm/identification.hpp"
#include "pmsm/imbalance_analytics.hpp"
#include "pmsm/reference_sim.hpp"

namespace pmsm::cli {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string triple(const Triple& t) { return num(t[0]) + ", " + num(t[1]) + ", " + num(t[2]); }

class Summary {
public:
    void add(const std::string& key, const std::string& value) { lines_ += key + ": " + value + "\n"; }
    void add(const std::string& key, double value) { add(key, num(value)); }
    void add(const std::string& key, const Triple& value) { add(key, triple(value)); }
    const std::string& text() const { return lines_; }

private:
    std::string lines_;
};

const std::vector<std::string>& relevant_sections(Subcommand sub)
{
    static const std::vector<std::string> coeffs{"machine", "imbalance", "output"};
    static const std::vector<std::string> sim{"machine", "imbalance", "operating_point", "sim", "output"};
    static const std::vector<std::string> identify{"machine", "imbalance", "operating_point",
                                                   "sim",     "output",    "identify"};
    switch (sub) {
    case Subcommand::Coeffs:
        return coeffs;
    case Subcommand::Identify:
        return identify;
    default:
        return sim;
    }
}

const OperatingPointSpec& require_operating_point(const Scenario& s, Subcommand sub)
{
    if (!s.operating_point)
        throw ConfigError("operating_point: section required by '" + std::string(to_string(sub)) + "'");
    return *s.operating_point;
}

TimeSeries select_channels(const TimeSeries& ts, const std::vector<std::string>& names)
{
    if (names.empty())
        return ts;
    TimeSeries out({ts.t().begin(), ts.t().end()}, {ts.theta().begin(), ts.theta().end()});
    for (const auto& name : names) {
        const auto c = ts.channel(name);
        out.add_channel(name, {c.begin(), c.end()});
    }
    return out;
}

std::size_t first_index_at(const TimeSeries& ts, double time)
{
    const auto t = ts.t();
    return static_cast<std::size_t>(std::ranges::lower_bound(t, time) - t.begin());
}

void add_phasor(Summary& sum, const std::string& prefix, const SecondHarmonicPhasor& p)
{
    sum.add(prefix + ".k", p.k);
    sum.add(prefix + ".phi", p.phi);
}

void add_harmonics(Summary& sum, const std::string& prefix, const TimeSeries& window, const std::string& channel)
{
    const auto h = demodulate(window.channel(channel), window.theta());
    sum.add(prefix + ".dc", h.dc);
    add_phasor(sum, prefix + ".second", h.second);
    sum.add(prefix + ".residual_rms", h.residual_rms);
}

void add_error(Summary& sum, const std::string& prefix, const WaveformError& e)
{
    sum.add(prefix + ".max_abs_error", e.max_abs_error);
    sum.add(prefix + ".rms_error", e.rms_error);
    sum.add(prefix + ".relative_rms", e.relative_rms ? num(*e.relative_rms) : std::string("n/a"));
}

void job_coeffs(const Scenario& s, Summary& sum)
{
    const auto dec = decompose(s.machine);
    sum.add("nominal.r", dec.nominal_r);
    sum.add("nominal.l", dec.nominal_l);
    sum.add("nominal.m", dec.nominal_m);
    sum.add("nominal.lam", dec.nominal_lam);
    sum.add("deviation.r", dec.d_r);
    sum.add("deviation.l", dec.d_l);
    sum.add("deviation.m", dec.d_m);
    sum.add("deviation.lam", dec.d_lam);
    const auto res = resistance_coeffs(dec.d_r);
    const auto flux = flux_coeffs(dec.d_lam);
    const auto ind = inductance_coeffs(dec.d_l, dec.d_m);
    sum.add("resistance.sum", dec.d_r[0] + dec.d_r[1] + dec.d_r[2]);
    sum.add("resistance.k", res.k);
    sum.add("resistance.phi", res.phi);
    sum.add("flux.sum", dec.d_lam[0] + dec.d_lam[1] + dec.d_lam[2]);
    sum.add("flux.k", flux.k);
    sum.add("flux.phi", flux.phi);
    sum.add("inductance.self.k", ind.self.k);
    sum.add("inductance.self.phi", ind.self.phi);
    sum.add("inductance.mutual.k", ind.mutual.k);
    sum.add("inductance.mutual.phi", ind.mutual.phi);
}

Dq0Vector voltage_command(const Scenario& s, const OperatingPointSpec& op)
{
    if (op.v_cmd)
        return *op.v_cmd;
    // Steady-state voltage of the nominal machine at the target currents.
    OperatingPoint target;
    target.omega_e = op.omega_e;
    target.i_d = op.i_cmd.d;
    target.i_q = op.i_cmd.q;
    const auto ideal = ideal_dq_nonsalient(nonsalient_nominal(decompose(s.base)), target);
    return {ideal.v_d, ideal.v_q, 0.0};
}

TimeSeries simulate(const Scenario& s, const OperatingPointSpec& op, Summary& sum)
{
    if (s.sim.mode == SimMode::CurrentFed)
        return run_current_fed(s.machine, op.i_cmd, op.omega_e, s.sim);
    const auto v = voltage_command(s, op);
    sum.add("voltage_command.v_d", v.d);
    sum.add("voltage_command.v_q", v.q);
    return run_voltage_fed(s.machine, v, op.omega_e, s.sim);
}

TimeSeries job_simulate(const Scenario& s, Summary& sum)
{
    const auto& op = require_operating_point(s, Subcommand::Simulate);
    auto ts = simulate(s, op, sum);
    sum.add("samples", static_cast<double>(ts.size()));

    const double discard = s.sim.mode == SimMode::VoltageFed ? transient_discard_time(s.machine, op.omega_e) : 0.0;
    sum.add("steady_state.start", discard);
    const auto window = ts.tail(first_index_at(ts, discard));
    const bool rotating = op.omega_e != 0.0;
    if (rotating) {
        try {
            const char* names[] = {"v_d", "v_q", "i_d", "i_q", "t_e"};
            for (const char* name : names)
                add_harmonics(sum, name, window, name);
        } catch (const InputError& e) {
            sum.add("harmonics", std::string("unavailable (") + e.what() + ")");
        }
    } else {
        sum.add("harmonics", "unavailable (omega_e = 0)");
    }
    return ts;
}

TimeSeries job_compare(const Scenario& s, Summary& sum, std::ostream& err)
{
    const auto& op = require_operating_point(s, Subcommand::Compare);
    if (s.sim.mode != SimMode::CurrentFed)
        err << "warning: compare always uses the current-fed reference; sim.mode ignored\n";
    SimConfig cfg = s.sim;
    cfg.mode = SimMode::CurrentFed;
    const auto ts = run_current_fed(s.machine, op.i_cmd, op.omega_e, cfg);
    const auto dec = decompose(s.machine);
    const auto nominal = nonsalient_nominal(dec);

    const auto theta = ts.theta();
    const auto v_d = ts.channel("v_d");
    const auto v_q = ts.channel("v_q");
    std::vector<double> model_d(ts.size()), model_q(ts.size());
    std::vector<double> delta_sim_d(ts.size()), delta_sim_q(ts.size());
    std::vector<double> delta_model_d(ts.size()), delta_model_q(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) {
        OperatingPoint p;
        p.theta = theta[n];
        p.omega_e = op.omega_e;
        p.i_d = op.i_cmd.d;
        p.i_q = op.i_cmd.q;
        p.i_0 = op.i_cmd.zero;
        const auto ideal = ideal_dq_nonsalient(nominal, p);
        const auto total = analytic_dq_voltages(dec, p);
        model_d[n] = total.v_d;
        model_q[n] = total.v_q;
        delta_sim_d[n] = v_d[n] - ideal.v_d;
        delta_sim_q[n] = v_q[n] - ideal.v_q;
        delta_model_d[n] = total.v_d - ideal.v_d;
        delta_model_q[n] = total.v_q - ideal.v_q;
    }

    const auto err_d = compare_waveforms(v_d, model_d);
    const auto err_q = compare_waveforms(v_q, model_q);
    add_error(sum, "v_d", err_d);
    add_error(sum, "v_q", err_q);
    add_error(sum, "delta_v_d", compare_waveforms(delta_sim_d, delta_model_d));
    add_error(sum, "delta_v_q", compare_waveforms(delta_sim_q, delta_model_q));
    sum.add("max_abs_error", std::max(err_d.max_abs_error, err_q.max_abs_error));

    TimeSeries out({ts.t().begin(), ts.t().end()}, {theta.begin(), theta.end()});
    out.add_channel("v_d_sim", {v_d.begin(), v_d.end()});
    out.add_channel("v_q_sim", {v_q.begin(), v_q.end()});
    out.add_channel("v_d_model", std::move(model_d));
    out.add_channel("v_q_model", std::move(model_q));
    out.add_channel("dv_d_sim", std::move(delta_sim_d));
    out.add_channel("dv_q_sim", std::move(delta_sim_q));
    out.add_channel("dv_d_model", std::move(delta_model_d));
    out.add_channel("dv_q_model", std::move(delta_model_q));
    return out;
}

void job_identify(const Scenario& s, const std::filesystem::path& out_dir, Summary& sum)
{
    const auto& op = require_operating_point(s, Subcommand::Identify);
    if (!s.identify.family)
        throw ConfigError("identify.family: missing key");

    TimeSeries data;
    if (s.identify.input) {
        std::filesystem::path input(*s.identify.input);
        if (input.is_relative())
            input = out_dir / input;
        data = read_csv(input);
        sum.add("input", input.filename().string());
    } else {
        SimConfig cfg = s.sim;
        cfg.mode = SimMode::CurrentFed;
        data = run_current_fed(s.machine, op.i_cmd, op.omega_e, cfg);
        sum.add("input", "internal current-fed simulation");
    }

    const auto i_d = data.channel("i_d");
    const auto i_q = data.channel("i_q");
    const double mean_d = std::accumulate(i_d.begin(), i_d.end(), 0.0) / static_cast<double>(data.size());
    const double mean_q = std::accumulate(i_q.begin(), i_q.end(), 0.0) / static_cast<double>(data.size());
    const double tol = 1e-9 * std::max(1.0, std::hypot(mean_d, mean_q));
    for (std::size_t n = 0; n < data.size(); ++n) {
        if (std::abs(i_d[n] - mean_d) > tol || std::abs(i_q[n] - mean_q) > tol)
            throw InputError("identify: dq currents vary over the record; identification needs constant currents "
                             "(current-fed data)");
    }
    if (op.i_cmd.zero != 0.0 || (data.has_channel("i_0") && std::ranges::any_of(data.channel("i_0"), [](double v) {
                                     return std::abs(v) > 1e-12;
                                 })))
        throw InputError("identify: zero-sequence current must be absent");

    const auto nominal = nonsalient_nominal(decompose(s.base));
    const auto theta = data.theta();
    const auto v_d = data.channel("v_d");
    const auto v_q = data.channel("v_q");
    std::vector<double> dv_d(data.size()), dv_q(data.size());
    for (std::size_t n = 0; n < data.size(); ++n) {
        OperatingPoint p;
        p.theta = theta[n];
        p.omega_e = op.omega_e;
        p.i_d = mean_d;
        p.i_q = mean_q;
        const auto ideal = ideal_dq_nonsalient(nominal, p);
        dv_d[n] = v_d[n] - ideal.v_d;
        dv_q[n] = v_q[n] - ideal.v_q;
    }

    const auto result = *s.identify.family == ImbalanceFamily::Resistance
                            ? fit_resistance(dv_d, dv_q, mean_d, mean_q, theta)
                            : fit_flux(dv_d, dv_q, op.omega_e, theta);
    sum.add("family", std::string(to_string(result.family)));
    sum.add("currents.i_d", mean_d);
    sum.add("currents.i_q", mean_q);
    sum.add("fit.sum", result.s);
    add_phasor(sum, "fit.phasor", result.phasor);
    sum.add("fit.raw", result.raw);
    sum.add("fit.per_phase", result.per_phase);
    sum.add("fit.nominal_shift", result.nominal_shift);
    sum.add("fit.residual_rms", result.fit_residual_rms);

    const auto injected = decompose(s.machine);
    const auto base = decompose(s.base);
    const bool resistance = result.family == ImbalanceFamily::Resistance;
    const Triple actual = resistance ? s.machine.resistances() : s.machine.flux_linkages();
    const double reference = resistance ? base.nominal_r : base.nominal_lam;
    const Triple expected{actual[0] - reference, actual[1] - reference, actual[2] - reference};
    sum.add("injected.raw", expected);
    sum.add("injected.per_phase", resistance ? injected.d_r : injected.d_lam);
    double worst = 0.0;
    for (std::size_t x = 0; x < 3; ++x)
        worst = std::max(worst, std::abs(result.raw[x] - expected[x]));
    sum.add("recovery.max_abs_error", worst);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << text) || !os.flush())
        throw Error("cannot write '" + path.string() + "'");
}

} // namespace

std::string_view to_string(Subcommand sub)
{
    switch (sub) {
    case Subcommand::Coeffs:
        return "coeffs";
    case Subcommand::Simulate:
        return "simulate";
    case Subcommand::Compare:
        return "compare";
    case Subcommand::Identify:
        return "identify";
    }
    return "?";
}

std::optional<Subcommand> parse_subcommand(std::string_view name)
{
    for (auto sub : {Subcommand::Coeffs, Subcommand::Simulate, Subcommand::Compare, Subcommand::Identify})
        if (to_string(sub) == name)
            return sub;
    return std::nullopt;
}

int run_scenario(Subcommand sub, const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& out,
                 std::ostream& err)
{
    const std::string name(to_string(sub));
    for (const auto& section : scenario.sections) {
        if (std::ranges::find(relevant_sections(sub), section) == relevant_sections(sub).end())
            err << "warning: section [" << section << "] is ignored by '" << name << "'\n";
    }

    try {
        std::filesystem::create_directories(out_dir);
        Summary sum;
        sum.add("subcommand", name);
        for (const auto& [key, value] : scenario.resolved)
            sum.add("config." + key, value);

        std::optional<TimeSeries> csv;
        switch (sub) {
        case Subcommand::Coeffs:
            job_coeffs(scenario, sum);
            break;
        case Subcommand::Simulate:
            csv = select_channels(job_simulate(scenario, sum), scenario.output.channels);
            break;
        case Subcommand::Compare:
            csv = job_compare(scenario, sum, err);
            break;
        case Subcommand::Identify:
            job_identify(scenario, out_dir, sum);
            break;
        }
        if (csv) {
            const auto csv_name = scenario.output.csv.value_or(name + ".csv");
            write_csv(*csv, out_dir / csv_name);
            sum.add("csv", csv_name);
        }
        write_text(out_dir / scenario.output.summary.value_or(name + "_summary.txt"), sum.text());
        out << sum.text();
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Parameter imbalance analysis for three-phase PM synchronous machines"};
    app.require_subcommand(1);
    std::string scenario_path;
    std::string out_dir = ".";
    for (auto sub : {Subcommand::Coeffs, Subcommand::Simulate, Subcommand::Compare, Subcommand::Identify}) {
        static const char* help[] = {"closed-form imbalance coefficients", "run the reference simulation",
                                     "analytical model vs reference simulation",
                                     "fit per-phase deviations to dq voltages"};
        auto* cmd = app.add_subcommand(std::string(to_string(sub)), help[static_cast<int>(sub)]);
        cmd->add_option("--scenario", scenario_path, "scenario file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: current directory)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    const auto sub = parse_subcommand(app.get_subcommands().front()->get_name());
    Scenario scenario;
    try {
        scenario = parse_scenario(scenario_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return run_scenario(*sub, scenario, out_dir, out, err);
}

} // namespace pmsm::cli
