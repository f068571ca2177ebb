#pragma once

#include <filesystem>
#include <ostream>

#include "pmsm/time_series.hpp"

namespace pmsm {

/**
 * Header `t,theta,<channel names>`, one row per sample, 17 significant digits
 * (exact round trip), '\n' line endings. Throws Error when the file cannot be
 * written.
 */
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);
void write_csv(const TimeSeries& ts, std::ostream& os);

/// Reads a file produced by write_csv. Throws InputError on malformed content.
TimeSeries read_csv(const std::filesystem::path& path);

} // namespace pmsm
