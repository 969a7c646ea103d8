#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace panelcast {

/// UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (the trailing `Z` is optional; a space may
/// replace the `T`). Throws parse_error.
Instant parse_instant(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_instant(Instant t);

/// 1-based day of the year in UTC.
int day_of_year(Instant t);

int year_of(Instant t);

inline std::int64_t seconds_since_epoch(Instant t) { return t.time_since_epoch().count(); }

inline Instant instant_from_seconds(std::int64_t s) { return Instant(std::chrono::seconds(s)); }

}  // namespace panelcast
