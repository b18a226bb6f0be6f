#include "dengue/sms/command.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace dengue::sms {

namespace {

struct Failure {
    ParseError error;
};

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ == text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void advance() { ++pos_; }

    [[noreturn]] void fail(std::string expected) const { fail_at(pos_, std::move(expected)); }
    [[noreturn]] static void fail_at(std::size_t pos, std::string expected) {
        throw Failure{ParseError{pos, std::move(expected)}};
    }

    static bool is_blank(char c) { return c == ' ' || c == '\t'; }
    static bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    std::size_t skip_blanks() {
        std::size_t start = pos_;
        while (!at_end() && is_blank(peek())) ++pos_;
        return pos_ - start;
    }

    void require_blanks() {
        if (skip_blanks() == 0) fail("space");
    }

    /// Upper-cased run of ASCII letters.
    std::string word() {
        std::string out;
        while (!at_end() && is_alpha(peek())) out += static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_++])));
        return out;
    }

    /// Remaining input must be blanks only.
    void finish() {
        skip_blanks();
        if (!at_end()) fail("end of message");
    }

    /// [+-]? digits ("." digits)?
    double decimal(const char* what) {
        const std::size_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        if (!is_digit(peek())) fail_at(start, std::string(what) + " as a decimal number");
        while (is_digit(peek())) ++pos_;
        if (peek() == '.') {
            ++pos_;
            if (!is_digit(peek())) fail_at(start, std::string(what) + " as a decimal number");
            while (is_digit(peek())) ++pos_;
        }
        const char* first = text_.data() + start;
        if (*first == '+') ++first;
        double value = 0.0;
        auto [p, ec] = std::from_chars(first, text_.data() + pos_, value);
        if (ec != std::errc() || p != text_.data() + pos_) fail_at(start, std::string(what) + " as a decimal number");
        return value;
    }

    std::int64_t integer(const char* what) {
        const std::size_t start = pos_;
        while (is_digit(peek())) ++pos_;
        if (pos_ == start) fail(std::string(what) + " as a whole number");
        std::int64_t value = 0;
        auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc()) fail_at(start, std::string(what) + " as a whole number");
        return value;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

CheckCommand parse_check(Cursor& in) {
    in.require_blanks();
    CheckCommand cmd;
    while (true) {
        const std::size_t start = in.pos();
        auto symptom = symptom_from_code(in.word());
        if (!symptom) Cursor::fail_at(start, "symptom code");
        cmd.symptoms.insert(*symptom);

        const std::size_t blanks = in.skip_blanks();
        if (in.at_end()) return cmd;
        if (in.peek() == ',') {
            in.advance();
            in.skip_blanks();
            continue;
        }
        if (blanks == 0) in.fail("',' or space");
    }
}

ReportCommand parse_report(Cursor& in) {
    if (in.at_end()) return {};
    in.require_blanks();
    if (in.at_end()) return {};

    const std::size_t lat_at = in.pos();
    const double lat = in.decimal("latitude");
    in.require_blanks();
    const std::size_t lon_at = in.pos();
    const double lon = in.decimal("longitude");
    in.finish();
    if (lat < -90.0 || lat > 90.0) Cursor::fail_at(lat_at, "latitude between -90 and 90");
    if (lon < -180.0 || lon > 180.0) Cursor::fail_at(lon_at, "longitude between -180 and 180");
    return ReportCommand{geo::GeoPoint{lat, lon}};
}

PapayaCommand parse_papaya(Cursor& in) {
    in.require_blanks();
    PapayaCommand cmd;
    cmd.platelet_before = in.integer("platelet count before");
    in.require_blanks();
    cmd.platelet_after = in.integer("platelet count after");
    in.finish();
    return cmd;
}

SmsCommand parse_message(Cursor& in) {
    const auto keyword = in.word();
    if (keyword == "CHECK") return parse_check(in);
    if (keyword == "REPORT") return parse_report(in);
    if (keyword == "PAPAYA") return parse_papaya(in);
    if (keyword == "HELP") {
        in.finish();
        return HelpCommand{};
    }
    Cursor::fail_at(0, "command CHECK, REPORT, PAPAYA or HELP");
}

std::string format_decimal(double v) {
    std::array<char, 400> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    return std::string(buf.data(), p);
}

}  // namespace

ParseResult parse_sms(std::string_view text) {
    if (text.size() > kMaxSmsLength) return ParseError{kMaxSmsLength, "end of message (160 characters max)"};
    Cursor in(text);
    try {
        return parse_message(in);
    } catch (const Failure& f) {
        return f.error;
    }
}

std::string render(const SmsCommand& command) {
    struct Renderer {
        std::string operator()(const CheckCommand& c) const {
            std::string out = "CHECK";
            char sep = ' ';
            for (auto s : c.symptoms.to_vector()) {
                out += sep;
                out += to_code(s);
                sep = ',';
            }
            return out;
        }
        std::string operator()(const ReportCommand& c) const {
            if (!c.location) return "REPORT";
            return "REPORT " + format_decimal(c.location->latitude) + " " + format_decimal(c.location->longitude);
        }
        std::string operator()(const PapayaCommand& c) const {
            return "PAPAYA " + std::to_string(c.platelet_before) + " " + std::to_string(c.platelet_after);
        }
        std::string operator()(const HelpCommand&) const { return "HELP"; }
    };
    return std::visit(Renderer{}, command);
}

}  // namespace dengue::sms
