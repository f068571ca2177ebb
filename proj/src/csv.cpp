#include "pmsm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pmsm/errors.hpp"

namespace pmsm {

namespace {

void put(std::string& line, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

void write_csv(const TimeSeries& ts, std::ostream& os)
{
    std::string line = "t,theta";
    for (const auto& c : ts.channels())
        line += "," + c.name;
    os << line << '\n';
    const auto t = ts.t();
    const auto theta = ts.theta();
    for (std::size_t n = 0; n < ts.size(); ++n) {
        line.clear();
        put(line, t[n]);
        line += ',';
        put(line, theta[n]);
        for (const auto& c : ts.channels()) {
            line += ',';
            put(line, c.samples[n]);
        }
        os << line << '\n';
    }
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    write_csv(ts, os);
    os.flush();
    if (!os)
        throw Error("failed writing '" + path.string() + "'");
}

TimeSeries read_csv(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw InputError("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line))
        throw InputError(path.string() + ": empty file");
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "t" || header[1] != "theta")
        throw InputError(path.string() + ": header must start with 't,theta'");

    std::vector<std::vector<double>> columns(header.size());
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InputError(path.string() + ":" + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
        for (std::size_t k = 0; k < cells.size(); ++k) {
            double v = 0.0;
            const auto& cell = cells[k];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
                throw InputError(path.string() + ":" + std::to_string(row) + ": bad number '" + cell + "'");
            columns[k].push_back(v);
        }
    }
    TimeSeries ts(std::move(columns[0]), std::move(columns[1]));
    for (std::size_t k = 2; k < header.size(); ++k)
        ts.add_channel(header[k], std::move(columns[k]));
    return ts;
}

} // namespace pmsm
