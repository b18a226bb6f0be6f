#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dengue/core/time.hpp"

namespace dengue {

inline constexpr std::int64_t kMinPlatelets = 1'000;
inline constexpr std::int64_t kMaxPlatelets = 2'000'000;

/// Platelet counts (per microlitre) before and after papaya-leaf treatment.
struct PlateletFeedback {
    std::string user_id;
    std::int64_t platelet_before = 0;
    std::int64_t platelet_after = 0;
    Date before_date{};
    Date after_date{};
    Timestamp submitted_at{};

    friend bool operator==(const PlateletFeedback&, const PlateletFeedback&) = default;
};

enum class Outcome { Improved, Unchanged, Worsened };

std::string_view to_string(Outcome o) noexcept;
std::optional<Outcome> outcome_from_string(std::string_view s) noexcept;

struct FeedbackOutcome {
    Outcome outcome = Outcome::Unchanged;
    std::int64_t delta = 0;

    friend bool operator==(const FeedbackOutcome&, const FeedbackOutcome&) = default;
};

/// Throws ValidationError naming the first offending field.
void validate_feedback(const PlateletFeedback& fb);

FeedbackOutcome evaluate_feedback(const PlateletFeedback& fb);

}  // namespace dengue
