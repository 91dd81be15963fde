#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace casflow {

// Earliest timestamp a record may carry (2006-01-01T00:00:00Z).
constexpr std::int64_t kMinValidTimestamp = 1136073600;

// Parses an ISO-8601 UTC timestamp at second granularity.
// Accepts "YYYY-MM-DDTHH:MM:SS" with an optional "Z" or "+00:00" suffix,
// and a space instead of the "T" separator. Fractional seconds are rejected.
std::optional<std::int64_t> parse_timestamp_utc(std::string_view s);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp_utc(std::int64_t ts);

// "YYYY-MM-DD" (used as the audit cache day key)
std::string format_date_utc(std::int64_t ts);

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d);

}  // namespace casflow
