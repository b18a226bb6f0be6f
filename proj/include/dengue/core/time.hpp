#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace dengue {

/// UTC instant at millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Date = std::chrono::year_month_day;
using Clock = std::function<Timestamp()>;

Timestamp now_utc();
Clock system_clock();

/// Allowance for client clocks running ahead of the server.
inline constexpr std::chrono::minutes kClockSkew{5};

inline bool is_future(Timestamp t, Timestamp now) { return t > now + kClockSkew; }

/// RFC 3339 UTC: "2024-05-01T12:00:00Z", with ".mmm" only when the
/// millisecond part is non-zero.
std::string format_rfc3339(Timestamp t);

/// Accepts any RFC 3339 date-time (numeric offsets are normalised to UTC,
/// fractional seconds beyond milliseconds are truncated).
std::optional<Timestamp> parse_rfc3339(std::string_view text);

std::string format_date(Date d);

/// Strict "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text);

inline Date date_of(Timestamp t) { return Date{std::chrono::floor<std::chrono::days>(t)}; }

inline std::int64_t to_unix_ms(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_unix_ms(std::int64_t ms) { return Timestamp{std::chrono::milliseconds{ms}}; }

}  // namespace dengue
