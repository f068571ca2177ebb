#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmsm {

/// Uniformly sampled record: time base, electrical angle and named channels.
class TimeSeries {
public:
    struct Channel {
        std::string name;
        std::vector<double> samples;
    };

    TimeSeries() = default;
    TimeSeries(std::vector<double> t, std::vector<double> theta);

    std::size_t size() const { return t_.size(); }
    std::span<const double> t() const { return t_; }
    std::span<const double> theta() const { return theta_; }
    const std::vector<Channel>& channels() const { return channels_; }

    /// Appends a channel; throws InputError on length mismatch or duplicate name.
    void add_channel(std::string name, std::vector<double> samples);

    bool has_channel(std::string_view name) const;

    /// Throws InputError when the channel is absent.
    std::span<const double> channel(std::string_view name) const;

    /// Samples [first, size()) as a new series.
    TimeSeries tail(std::size_t first) const;

private:
    std::vector<double> t_;
    std::vector<double> theta_;
    std::vector<Channel> channels_;
};

} // namespace pmsm
