#include "pmsm/time_series.hpp"

#include <algorithm>

#include "pmsm/errors.hpp"

namespace pmsm {

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> theta) : t_(std::move(t)), theta_(std::move(theta))
{
    if (t_.size() != theta_.size())
        throw InputError("time series: t and theta lengths differ");
}

void TimeSeries::add_channel(std::string name, std::vector<double> samples)
{
    if (samples.size() != t_.size())
        throw InputError("time series: channel '" + name + "' has " + std::to_string(samples.size()) +
                         " samples, expected " + std::to_string(t_.size()));
    if (has_channel(name))
        throw InputError("time series: duplicate channel '" + name + "'");
    channels_.push_back({std::move(name), std::move(samples)});
}

bool TimeSeries::has_channel(std::string_view name) const
{
    return std::ranges::any_of(channels_, [&](const Channel& c) { return c.name == name; });
}

std::span<const double> TimeSeries::channel(std::string_view name) const
{
    const auto it = std::ranges::find_if(channels_, [&](const Channel& c) { return c.name == name; });
    if (it == channels_.end())
        throw InputError("time series: no channel named '" + std::string(name) + "'");
    return it->samples;
}

TimeSeries TimeSeries::tail(std::size_t first) const
{
    first = std::min(first, size());
    const auto from = static_cast<std::ptrdiff_t>(first);
    TimeSeries out({t_.begin() + from, t_.end()}, {theta_.begin() + from, theta_.end()});
    for (const auto& c : channels_)
        out.add_channel(c.name, {c.samples.begin() + from, c.samples.end()});
    return out;
}

} // namespace pmsm
