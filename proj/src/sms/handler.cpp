#include "dengue/sms/handler.hpp"

#include <cctype>
#include <iostream>

#include "dengue/core/classifier.hpp"
#include "dengue/core/errors.hpp"
#include "dengue/core/feedback.hpp"

namespace dengue::sms {

namespace {

constexpr std::string_view kServiceErrorReply = "SERVICE UNAVAILABLE. TRY AGAIN LATER.";
constexpr std::string_view kBadPlateletsReply = "INVALID PLATELET COUNTS. USE 1000-2000000 PER UL.";

/// Printable ASCII only, clipped to one segment.
std::string fit(std::string text) {
    for (auto& c : text)
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) > 0x7e) c = '?';
    if (text.size() > kMaxSmsLength) text.resize(kMaxSmsLength);
    return text;
}

}  // namespace

std::string format_parse_error(const ParseError& error) {
    std::string expected;
    for (char c : error.expected) expected += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return fit("ERROR AT " + std::to_string(error.position) + ": EXPECTED " + expected + ". SEND HELP");
}

SmsService::SmsService(store::Store& store, std::chrono::milliseconds dedup_window, Clock clock)
    : store_(store), dedup_window_(dedup_window), clock_(std::move(clock)) {}

std::string SmsService::receive(const std::string& sender, std::string_view text) {
    auto parsed = parse_sms(text);
    if (auto* error = std::get_if<ParseError>(&parsed)) return format_parse_error(*error);
    return handle(sender, std::get<SmsCommand>(parsed));
}

std::string SmsService::handle(const std::string& sender, const SmsCommand& command) {
    if (std::holds_alternative<HelpCommand>(command)) return std::string(kHelpReply);
    try {
        auto user = store_.get_user_by_phone(sender);
        if (!user) return std::string(kUnknownSenderReply);
        if (auto* c = std::get_if<CheckCommand>(&command)) return fit(check(*user, *c));
        if (auto* r = std::get_if<ReportCommand>(&command)) return fit(report(*user, *r));
        return fit(papaya(*user, std::get<PapayaCommand>(command)));
    } catch (const std::exception& e) {
        std::cerr << "sms handler error: " << e.what() << "\n";
        return std::string(kServiceErrorReply);
    }
}

std::string SmsService::check(const UserProfile& user, const CheckCommand& cmd) {
    auto result = classify_symptoms(cmd.symptoms, clock_());
    store_.insert_check_event({user.user_id, result.symptoms, result.likely_dengue, result.evaluated_at});
    return std::string(result.likely_dengue ? kPositiveReply : kNegativeReply);
}

std::string SmsService::report(const UserProfile& user, const ReportCommand& cmd) {
    try {
        store_.insert_case({"", user.user_id, cmd.location, clock_()}, dedup_window_);
    } catch (const ConflictError&) {
        auto days = std::chrono::duration_cast<std::chrono::days>(dedup_window_).count();
        return "CASE ALREADY REPORTED IN THE LAST " + std::to_string(days) + " DAYS";
    }
    return std::string(cmd.location ? kCaseRecordedReply : kCasePendingReply);
}

std::string SmsService::papaya(const UserProfile& user, const PapayaCommand& cmd) {
    const auto now = clock_();
    // SMS carries no dates; both blood tests are taken as reported today.
    PlateletFeedback fb{user.user_id, cmd.platelet_before, cmd.platelet_after, date_of(now), date_of(now), now};
    FeedbackOutcome outcome;
    try {
        outcome = evaluate_feedback(fb);
    } catch (const ValidationError&) {
        return std::string(kBadPlateletsReply);
    }
    store_.insert_feedback(fb);
    switch (outcome.outcome) {
        case Outcome::Improved: return "FEEDBACK RECORDED. PLATELETS IMPROVED BY " + std::to_string(outcome.delta);
        case Outcome::Worsened: return "FEEDBACK RECORDED. PLATELETS DECREASED BY " + std::to_string(-outcome.delta);
        case Outcome::Unchanged: break;
    }
    return "FEEDBACK RECORDED. PLATELETS UNCHANGED";
}

std::string LoopbackGateway::deliver(const std::string& sender, std::string_view text) {
    auto reply = service_.receive(sender, text);
    std::lock_guard lock(mu_);
    outbox_.push_back({sender, std::string(text), reply});
    return reply;
}

std::vector<LoopbackGateway::Exchange> LoopbackGateway::outbox() const {
    std::lock_guard lock(mu_);
    return outbox_;
}

}  // namespace dengue::sms
