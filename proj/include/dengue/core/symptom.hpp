#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace dengue {

/// The nine self-reported symptoms. Nausea and vomiting share one code.
enum class Symptom : std::uint8_t {
    Fever,
    Headache,
    EyePain,
    Myalgia,
    Rash,
    Bleed,
    LowWbc,
    Nausea,
    JointSwell,
};

inline constexpr std::array<Symptom, 9> kAllSymptoms{
    Symptom::Fever,  Symptom::Headache, Symptom::EyePain, Symptom::Myalgia,   Symptom::Rash,
    Symptom::Bleed,  Symptom::LowWbc,   Symptom::Nausea,  Symptom::JointSwell,
};

/// Canonical wire code ("FEVER", "EYEPAIN", ...). Shared by the JSON API and SMS.
std::string_view to_code(Symptom s) noexcept;

/// Exact, case-sensitive inverse of to_code.
std::optional<Symptom> symptom_from_code(std::string_view code) noexcept;

/// Plain-language label for display.
std::string_view display_name(Symptom s) noexcept;

/// Order-free, duplicate-free set of symptoms backed by a 9-bit mask.
class SymptomSet {
public:
    static constexpr std::uint16_t kFullMask = (1u << kAllSymptoms.size()) - 1;

    constexpr SymptomSet() = default;
    constexpr SymptomSet(std::initializer_list<Symptom> items) {
        for (auto s : items) insert(s);
    }

    /// Bits outside the nine symptoms are dropped.
    static constexpr SymptomSet from_mask(std::uint16_t mask) {
        SymptomSet set;
        set.mask_ = mask & kFullMask;
        return set;
    }

    constexpr void insert(Symptom s) { mask_ |= bit(s); }
    constexpr void erase(Symptom s) { mask_ &= static_cast<std::uint16_t>(~bit(s)); }
    constexpr bool contains(Symptom s) const { return (mask_ & bit(s)) != 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(mask_)); }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint16_t mask() const { return mask_; }

    /// Members in canonical enumeration order.
    std::vector<Symptom> to_vector() const;

    friend constexpr bool operator==(SymptomSet, SymptomSet) = default;

private:
    static constexpr std::uint16_t bit(Symptom s) {
        return static_cast<std::uint16_t>(1u << static_cast<unsigned>(s));
    }

    std::uint16_t mask_ = 0;
};

}  // namespace dengue
