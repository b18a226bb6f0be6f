#include "dengue/core/symptom.hpp"

namespace dengue {

namespace {

struct SymptomInfo {
    std::string_view code;
    std::string_view name;
};

constexpr std::array<SymptomInfo, 9> kInfo{{
    {"FEVER", "Fever"},
    {"HEADACHE", "Severe headache"},
    {"EYEPAIN", "Severe eye pain"},
    {"MYALGIA", "Joint and muscle pain"},
    {"RASH", "Skin rash"},
    {"BLEED", "Mild bleeding"},
    {"LOWWBC", "Low white blood cell count"},
    {"NAUSEA", "Nausea or vomiting"},
    {"JOINTSWELL", "Joint swelling"},
}};

}  // namespace

std::string_view to_code(Symptom s) noexcept { return kInfo[static_cast<std::size_t>(s)].code; }

std::string_view display_name(Symptom s) noexcept { return kInfo[static_cast<std::size_t>(s)].name; }

std::optional<Symptom> symptom_from_code(std::string_view code) noexcept {
    for (auto s : kAllSymptoms)
        if (to_code(s) == code) return s;
    return std::nullopt;
}

std::vector<Symptom> SymptomSet::to_vector() const {
    std::vector<Symptom> out;
    for (auto s : kAllSymptoms)
        if (contains(s)) out.push_back(s);
    return out;
}

}  // namespace dengue
