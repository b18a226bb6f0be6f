#pragma once

#include <string>
#include <string_view>

#include "dengue/core/symptom.hpp"
#include "dengue/core/time.hpp"

namespace dengue {

inline constexpr std::string_view kReferralSentence =
    "You are highly likely to be infected with dengue fever. Please see a physician immediately.";

struct ClassificationResult {
    bool likely_dengue = false;
    std::string advice;
    Timestamp evaluated_at{};
    SymptomSet symptoms;
};

/// Screening rule: fever plus at least two of the other eight symptoms.
constexpr bool is_likely_dengue(SymptomSet symptoms) {
    return symptoms.contains(Symptom::Fever) && symptoms.size() >= 3;
}

std::string_view advice_for(bool likely_dengue) noexcept;

ClassificationResult classify_symptoms(SymptomSet symptoms, Timestamp evaluated_at);

}  // namespace dengue
