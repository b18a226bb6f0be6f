#include "dengue/core/feedback.hpp"

#include "dengue/core/errors.hpp"

namespace dengue {

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Improved: return "improved";
        case Outcome::Unchanged: return "unchanged";
        case Outcome::Worsened: return "worsened";
    }
    return "unchanged";
}

std::optional<Outcome> outcome_from_string(std::string_view s) noexcept {
    for (auto o : {Outcome::Improved, Outcome::Unchanged, Outcome::Worsened})
        if (to_string(o) == s) return o;
    return std::nullopt;
}

void validate_feedback(const PlateletFeedback& fb) {
    auto check_count = [](std::int64_t v, const char* field) {
        if (v < kMinPlatelets || v > kMaxPlatelets)
            throw ValidationError(field, std::string(field) + " must be between 1000 and 2000000 per microlitre");
    };
    check_count(fb.platelet_before, "platelet_before");
    check_count(fb.platelet_after, "platelet_after");
    if (!fb.before_date.ok()) throw ValidationError("before_date", "before_date is not a valid date");
    if (!fb.after_date.ok()) throw ValidationError("after_date", "after_date is not a valid date");
    if (std::chrono::sys_days{fb.before_date} > std::chrono::sys_days{fb.after_date})
        throw ValidationError("after_date", "after_date must not precede before_date");
}

FeedbackOutcome evaluate_feedback(const PlateletFeedback& fb) {
    validate_feedback(fb);
    std::int64_t delta = fb.platelet_after - fb.platelet_before;
    Outcome outcome = delta > 0 ? Outcome::Improved : delta < 0 ? Outcome::Worsened : Outcome::Unchanged;
    return {outcome, delta};
}

}  // namespace dengue
