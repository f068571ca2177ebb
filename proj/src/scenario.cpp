#include "pmsm/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pmsm/errors.hpp"

namespace pmsm::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"machine",
         {"r", "l", "m", "lam", "r_a", "r_b", "r_c", "l_a", "l_b", "l_c", "m_ab", "m_bc", "m_ca", "lam_a", "lam_b",
          "lam_c", "pole_pairs"}},
        {"imbalance", {"units", "r", "l", "m", "lam"}},
        {"operating_point", {"omega_e", "i_d", "i_q", "i_0", "v_d", "v_q"}},
        {"sim", {"dt", "duration", "mode", "neutral", "record_stride"}},
        {"output", {"csv", "summary", "channels"}},
        {"identify", {"family", "input"}},
    };
    return keys;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_triple(const Triple& t)
{
    return format_number(t[0]) + ", " + format_number(t[1]) + ", " + format_number(t[2]);
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    const pt::ptree* section(const std::string& name) const { return tree_.get_child_optional(name).get_ptr(); }

    std::optional<std::string> raw(const std::string& sec, const std::string& key) const
    {
        const auto* s = section(sec);
        if (!s)
            return std::nullopt;
        const auto v = s->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v)
            return std::nullopt;
        return trim(*v);
    }

    std::optional<double> number(const std::string& sec, const std::string& key) const
    {
        const auto text = raw(sec, key);
        if (!text)
            return std::nullopt;
        return parse_number(sec + "." + key, *text);
    }

    std::optional<Triple> triple(const std::string& sec, const std::string& key) const
    {
        const auto text = raw(sec, key);
        if (!text)
            return std::nullopt;
        Triple out{};
        std::size_t n = 0;
        std::stringstream ss(*text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (n == 3)
                throw ConfigError(sec + "." + key + ": expected three comma-separated values");
            out[n++] = parse_number(sec + "." + key, trim(item));
        }
        if (n != 3)
            throw ConfigError(sec + "." + key + ": expected three comma-separated values");
        return out;
    }

    static double parse_number(const std::string& key, const std::string& text)
    {
        double v = 0.0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || text.empty() || !std::isfinite(v))
            throw ConfigError(key + ": expected a finite number, got '" + text + "'");
        return v;
    }

private:
    const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree)
{
    for (const auto& [name, node] : tree) {
        if (node.empty() && !node.data().empty())
            throw ConfigError(name + ": key outside of any section");
        const auto sec = schema().find(name);
        if (sec == schema().end())
            throw ConfigError(name + ": unknown section");
        for (const auto& [key, value] : node) {
            if (!sec->second.contains(key))
                throw ConfigError(name + "." + key + ": unknown key");
        }
    }
}

double family_value(const Reader& in, const char* family, const char* phase)
{
    const std::string key = std::string(family) + "_" + phase;
    if (auto v = in.number("machine", key))
        return *v;
    if (auto v = in.number("machine", family))
        return *v;
    throw ConfigError("machine." + key + ": missing key (set it or the shorthand machine." + family + ")");
}

MachineParameters read_machine(const Reader& in)
{
    if (!in.section("machine"))
        throw ConfigError("machine: missing section");
    MachineParameters p;
    p.r_a = family_value(in, "r", "a");
    p.r_b = family_value(in, "r", "b");
    p.r_c = family_value(in, "r", "c");
    p.l_a = family_value(in, "l", "a");
    p.l_b = family_value(in, "l", "b");
    p.l_c = family_value(in, "l", "c");
    p.m_ab = family_value(in, "m", "ab");
    p.m_bc = family_value(in, "m", "bc");
    p.m_ca = family_value(in, "m", "ca");
    p.lam_a = family_value(in, "lam", "a");
    p.lam_b = family_value(in, "lam", "b");
    p.lam_c = family_value(in, "lam", "c");
    const auto pole_pairs = in.number("machine", "pole_pairs");
    if (!pole_pairs)
        throw ConfigError("machine.pole_pairs: missing key");
    if (*pole_pairs < 1.0 || std::floor(*pole_pairs) != *pole_pairs || *pole_pairs > 1e6)
        throw ConfigError("machine.pole_pairs: must be a positive integer");
    p.pole_pairs = static_cast<int>(*pole_pairs);
    return p;
}

void validate_machine(const MachineParameters& p)
{
    try {
        p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("machine.") + e.what());
    }
}

ImbalanceSpec read_imbalance(const Reader& in)
{
    ImbalanceSpec spec;
    if (const auto units = in.raw("imbalance", "units")) {
        if (*units == "relative")
            spec.units = DeviationUnits::Relative;
        else if (*units == "absolute")
            spec.units = DeviationUnits::Absolute;
        else
            throw ConfigError("imbalance.units: expected 'relative' or 'absolute', got '" + *units + "'");
    }
    spec.r = in.triple("imbalance", "r");
    spec.l = in.triple("imbalance", "l");
    spec.m = in.triple("imbalance", "m");
    spec.lam = in.triple("imbalance", "lam");
    return spec;
}

MachineParameters apply_imbalance(const MachineParameters& base, const ImbalanceSpec& spec)
{
    const auto shift = [&](double& value, const std::optional<Triple>& dev, std::size_t k) {
        if (!dev)
            return;
        value = spec.units == DeviationUnits::Relative ? value * (1.0 + (*dev)[k]) : value + (*dev)[k];
    };
    MachineParameters p = base;
    shift(p.r_a, spec.r, 0), shift(p.r_b, spec.r, 1), shift(p.r_c, spec.r, 2);
    shift(p.l_a, spec.l, 0), shift(p.l_b, spec.l, 1), shift(p.l_c, spec.l, 2);
    shift(p.m_ab, spec.m, 0), shift(p.m_bc, spec.m, 1), shift(p.m_ca, spec.m, 2);
    shift(p.lam_a, spec.lam, 0), shift(p.lam_b, spec.lam, 1), shift(p.lam_c, spec.lam, 2);
    return p;
}

SimConfig read_sim(const Reader& in)
{
    SimConfig cfg;
    if (auto v = in.number("sim", "dt"))
        cfg.dt = *v;
    if (auto v = in.number("sim", "duration"))
        cfg.duration = *v;
    if (const auto mode = in.raw("sim", "mode")) {
        if (*mode == "current-fed")
            cfg.mode = SimMode::CurrentFed;
        else if (*mode == "voltage-fed")
            cfg.mode = SimMode::VoltageFed;
        else
            throw ConfigError("sim.mode: expected 'current-fed' or 'voltage-fed', got '" + *mode + "'");
    }
    if (const auto neutral = in.raw("sim", "neutral")) {
        if (*neutral == "isolated")
            cfg.neutral = Neutral::Isolated;
        else if (*neutral == "driven")
            cfg.neutral = Neutral::Driven;
        else
            throw ConfigError("sim.neutral: expected 'isolated' or 'driven', got '" + *neutral + "'");
    }
    if (auto v = in.number("sim", "record_stride")) {
        if (*v < 1.0 || std::floor(*v) != *v || *v > 1e9)
            throw ConfigError("sim.record_stride: must be a positive integer");
        cfg.record_stride = static_cast<std::size_t>(*v);
    }
    return cfg;
}

std::optional<OperatingPointSpec> read_operating_point(const Reader& in)
{
    if (!in.section("operating_point"))
        return std::nullopt;
    OperatingPointSpec op;
    const auto omega = in.number("operating_point", "omega_e");
    if (!omega)
        throw ConfigError("operating_point.omega_e: missing key");
    op.omega_e = *omega;
    op.i_cmd = {in.number("operating_point", "i_d").value_or(0.0), in.number("operating_point", "i_q").value_or(0.0),
                in.number("operating_point", "i_0").value_or(0.0)};
    const auto v_d = in.number("operating_point", "v_d");
    const auto v_q = in.number("operating_point", "v_q");
    if (v_d.has_value() != v_q.has_value())
        throw ConfigError(std::string("operating_point.") + (v_d ? "v_q" : "v_d") +
                          ": v_d and v_q must be given together");
    if (v_d)
        op.v_cmd = Dq0Vector{*v_d, *v_q, 0.0};
    return op;
}

OutputSpec read_output(const Reader& in)
{
    OutputSpec out;
    out.csv = in.raw("output", "csv");
    out.summary = in.raw("output", "summary");
    if (const auto channels = in.raw("output", "channels")) {
        std::stringstream ss(*channels);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            const bool known = std::ranges::find(kSimChannels, std::string_view(item)) != std::end(kSimChannels);
            if (!known)
                throw ConfigError("output.channels: unknown channel '" + item + "'");
            out.channels.push_back(item);
        }
    }
    return out;
}

IdentifySpec read_identify(const Reader& in)
{
    IdentifySpec spec;
    if (const auto family = in.raw("identify", "family")) {
        if (*family == "resistance")
            spec.family = ImbalanceFamily::Resistance;
        else if (*family == "flux")
            spec.family = ImbalanceFamily::Flux;
        else
            throw ConfigError("identify.family: expected 'resistance' or 'flux', got '" + *family + "'");
    }
    spec.input = in.raw("identify", "input");
    return spec;
}

void resolve(Scenario& s)
{
    auto& r = s.resolved;
    const auto add = [&](std::string key, std::string value) { r.emplace_back(std::move(key), std::move(value)); };
    const auto& m = s.machine;
    add("machine.r_abc", format_triple(m.resistances()));
    add("machine.l_abc", format_triple(m.self_inductances()));
    add("machine.m_ab_bc_ca", format_triple(m.mutual_inductances()));
    add("machine.lam_abc", format_triple(m.flux_linkages()));
    add("machine.pole_pairs", std::to_string(m.pole_pairs));
    add("imbalance.units", s.imbalance.units == DeviationUnits::Relative ? "relative" : "absolute");
    if (s.operating_point) {
        const auto& op = *s.operating_point;
        add("operating_point.omega_e", format_number(op.omega_e));
        add("operating_point.i_d", format_number(op.i_cmd.d));
        add("operating_point.i_q", format_number(op.i_cmd.q));
        add("operating_point.i_0", format_number(op.i_cmd.zero));
        if (op.v_cmd) {
            add("operating_point.v_d", format_number(op.v_cmd->d));
            add("operating_point.v_q", format_number(op.v_cmd->q));
        }
    }
    add("sim.dt", format_number(s.sim.dt));
    add("sim.duration", format_number(s.sim.duration));
    add("sim.mode", std::string(to_string(s.sim.mode)));
    add("sim.neutral", std::string(to_string(s.sim.neutral)));
    add("sim.record_stride", std::to_string(s.sim.record_stride));
    if (s.identify.family)
        add("identify.family", std::string(to_string(*s.identify.family)));
    if (s.identify.input)
        add("identify.input", *s.identify.input);
}

Scenario build(const pt::ptree& tree)
{
    check_keys(tree);
    const Reader in(tree);
    Scenario s;
    for (const auto& [name, node] : tree)
        s.sections.push_back(name);
    s.base = read_machine(in);
    validate_machine(s.base);
    s.imbalance = read_imbalance(in);
    s.machine = apply_imbalance(s.base, s.imbalance);
    validate_machine(s.machine);
    s.operating_point = read_operating_point(in);
    s.sim = read_sim(in);
    s.sim.validate(s.operating_point ? s.operating_point->omega_e : 0.0);
    s.output = read_output(in);
    s.identify = read_identify(in);
    resolve(s);
    return s;
}

} // namespace

Scenario parse_scenario_text(const std::string& text)
{
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("scenario: line " + std::to_string(e.line()) + ": " + e.message());
    }
    return build(tree);
}

Scenario parse_scenario(const std::filesystem::path& path)
{
    std::ifstream file(path);
    if (!file)
        throw ConfigError("scenario: cannot read '" + path.string() + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_scenario_text(buffer.str());
}

} // namespace pmsm::cli
