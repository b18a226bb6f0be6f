#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dengue/core/symptom.hpp"
#include "dengue/geo/geo_point.hpp"

namespace dengue::sms {

/// Single-segment SMS limit; applies to inbound text and every reply.
inline constexpr std::size_t kMaxSmsLength = 160;

struct CheckCommand {
    SymptomSet symptoms;
    friend bool operator==(const CheckCommand&, const CheckCommand&) = default;
};

struct ReportCommand {
    std::optional<geo::GeoPoint> location;
    friend bool operator==(const ReportCommand&, const ReportCommand&) = default;
};

struct PapayaCommand {
    std::int64_t platelet_before = 0;
    std::int64_t platelet_after = 0;
    friend bool operator==(const PapayaCommand&, const PapayaCommand&) = default;
};

struct HelpCommand {
    friend bool operator==(const HelpCommand&, const HelpCommand&) = default;
};

using SmsCommand = std::variant<CheckCommand, ReportCommand, PapayaCommand, HelpCommand>;

struct ParseError {
    std::size_t position = 0;  // 0-based character offset into the message
    std::string expected;
    friend bool operator==(const ParseError&, const ParseError&) = default;
};

using ParseResult = std::variant<SmsCommand, ParseError>;

/// Grammar (keywords and symptom codes are case-insensitive ASCII):
///
///   message := check | report | papaya | help      (trailing blanks allowed)
///   check   := "CHECK" WS code (SEP code)*         SEP := "," | WS
///   report  := "REPORT" (WS decimal WS decimal)?   latitude then longitude
///   papaya  := "PAPAYA" WS integer WS integer      before then after
///   help    := "HELP"
///
/// WS is one or more spaces or tabs. A comma separator may be surrounded by
/// blanks. Total on any input: failures yield a ParseError, never a partial
/// command.
ParseResult parse_sms(std::string_view text);

/// Canonical text for a command; parse_sms(render(c)) == c for every command
/// the grammar can express (CHECK needs at least one symptom).
std::string render(const SmsCommand& command);

}  // namespace dengue::sms
