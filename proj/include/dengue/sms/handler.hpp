#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "dengue/core/time.hpp"
#include "dengue/sms/command.hpp"
#include "dengue/store/store.hpp"

namespace dengue::sms {

inline constexpr std::string_view kPositiveReply = "LIKELY DENGUE. SEE A PHYSICIAN IMMEDIATELY.";
inline constexpr std::string_view kNegativeReply =
    "SYMPTOMS DO NOT MATCH DENGUE RULE. MONITOR AND PREVENT MOSQUITO BITES.";
inline constexpr std::string_view kCaseRecordedReply = "CASE RECORDED";
inline constexpr std::string_view kCasePendingReply = "CASE RECORDED LOCATION PENDING";
inline constexpr std::string_view kUnknownSenderReply = "NUMBER NOT REGISTERED. VISIT A HEALTH CENTRE TO REGISTER.";
inline constexpr std::string_view kHelpReply =
    "CHECK <CODES> | REPORT [LAT LON] | PAPAYA <BEFORE> <AFTER>. CODES: FEVER HEADACHE EYEPAIN MYALGIA RASH BLEED "
    "LOWWBC NAUSEA JOINTSWELL";

/// Executes SMS commands against the same store and rules as the JSON API.
/// Every reply is at most kMaxSmsLength ASCII characters.
class SmsService {
public:
    SmsService(store::Store& store, std::chrono::milliseconds dedup_window = store::kDefaultDedupWindow,
               Clock clock = system_clock());

    /// `sender` is an E.164 number linked to an account by an operator.
    std::string handle(const std::string& sender, const SmsCommand& command);

    /// Parses then handles; parse failures become an error reply.
    std::string receive(const std::string& sender, std::string_view text);

private:
    std::string check(const UserProfile& user, const CheckCommand& cmd);
    std::string report(const UserProfile& user, const ReportCommand& cmd);
    std::string papaya(const UserProfile& user, const PapayaCommand& cmd);

    store::Store& store_;
    std::chrono::milliseconds dedup_window_;
    Clock clock_;
};

std::string format_parse_error(const ParseError& error);

/// In-process stand-in for a carrier: inbound messages go straight to an
/// SmsService and the replies are kept in an outbox.
class LoopbackGateway {
public:
    struct Exchange {
        std::string sender;
        std::string text;
        std::string reply;
    };

    explicit LoopbackGateway(SmsService& service) : service_(service) {}

    std::string deliver(const std::string& sender, std::string_view text);
    std::vector<Exchange> outbox() const;

private:
    SmsService& service_;
    mutable std::mutex mu_;
    std::vector<Exchange> outbox_;
};

}  // namespace dengue::sms
