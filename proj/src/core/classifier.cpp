#include "dengue/core/classifier.hpp"

namespace dengue {

namespace {

constexpr std::string_view kPositiveAdvice =
    "You are highly likely to be infected with dengue fever. Please see a physician immediately. "
    "This check is informational and is not a medical diagnosis.";

constexpr std::string_view kNegativeAdvice =
    "Your symptoms do not match the dengue screening rule. Keep preventing mosquito bites: remove "
    "standing water around your home and use insect repellent. This is not a medical diagnosis; "
    "see a doctor if you feel unwell.";

}  // namespace

std::string_view advice_for(bool likely_dengue) noexcept { return likely_dengue ? kPositiveAdvice : kNegativeAdvice; }

ClassificationResult classify_symptoms(SymptomSet symptoms, Timestamp evaluated_at) {
    bool likely = is_likely_dengue(symptoms);
    return ClassificationResult{likely, std::string(advice_for(likely)), evaluated_at, symptoms};
}

}  // namespace dengue
