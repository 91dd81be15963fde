#include "casflow/timeutil.hpp"

#include <charconv>
#include <cstdio>

namespace casflow {

// Howard Hinnant's civil-from-days / days-from-civil arithmetic.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

static void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                            unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

static bool parse_uint_fixed(std::string_view s, std::size_t pos,
                             std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

std::optional<std::int64_t> parse_timestamp_utc(std::string_view s) {
  // YYYY-MM-DD[T ]HH:MM:SS[Z|+00:00]
  unsigned year, month, day, hour, minute, second;
  if (s.size() < 19) return std::nullopt;
  if (!parse_uint_fixed(s, 0, 4, year) || s[4] != '-' ||
      !parse_uint_fixed(s, 5, 2, month) || s[7] != '-' ||
      !parse_uint_fixed(s, 8, 2, day))
    return std::nullopt;
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  if (!parse_uint_fixed(s, 11, 2, hour) || s[13] != ':' ||
      !parse_uint_fixed(s, 14, 2, minute) || s[16] != ':' ||
      !parse_uint_fixed(s, 17, 2, second))
    return std::nullopt;
  std::string_view rest = s.substr(19);
  if (!rest.empty() && rest != "Z" && rest != "+00:00" && rest != "+0000")
    return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60)
    return std::nullopt;
  std::int64_t days = days_from_civil(static_cast<std::int64_t>(year), month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_timestamp_utc(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  std::int64_t sod = ts % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod % 3600) / 60),
                static_cast<long long>(sod % 60));
  return buf;
}

std::string format_date_utc(std::int64_t ts) {
  return format_timestamp_utc(ts).substr(0, 10);
}

}  // namespace casflow
