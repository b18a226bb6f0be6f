#include "dengue/core/profile.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dengue/core/errors.hpp"

namespace dengue {

std::string_view to_string(Gender g) noexcept {
    switch (g) {
        case Gender::Female: return "female";
        case Gender::Male: return "male";
        case Gender::Other: return "other";
    }
    return "other";
}

std::optional<Gender> gender_from_string(std::string_view s) noexcept {
    for (auto g : {Gender::Female, Gender::Male, Gender::Other})
        if (to_string(g) == s) return g;
    return std::nullopt;
}

std::string_view to_string(Role r) noexcept { return r == Role::Operator ? "operator" : "patient"; }

std::optional<Role> role_from_string(std::string_view s) noexcept {
    if (s == "operator") return Role::Operator;
    if (s == "patient") return Role::Patient;
    return std::nullopt;
}

bool is_valid_email(std::string_view email) noexcept {
    if (std::count(email.begin(), email.end(), '@') != 1) return false;
    auto at = email.find('@');
    if (at == 0 || at + 1 == email.size()) return false;
    return std::none_of(email.begin(), email.end(),
                        [](char c) { return std::isspace(static_cast<unsigned char>(c)) || std::iscntrl(static_cast<unsigned char>(c)); });
}

bool is_valid_phone(std::string_view phone) noexcept {
    if (phone.size() < 3 || phone.size() > 16 || phone[0] != '+' || phone[1] == '0') return false;
    return std::all_of(phone.begin() + 1, phone.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string normalize_email(std::string_view email) {
    std::string out(email);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void validate_profile(const UserProfile& p, Date today) {
    if (p.name.empty()) throw ValidationError("name", "name must not be empty");
    if (!is_valid_email(p.email)) throw ValidationError("email", "email must look like local@domain");
    if (!p.date_of_birth.ok()) throw ValidationError("date_of_birth", "date_of_birth is not a valid date");
    if (std::chrono::sys_days{p.date_of_birth} >= std::chrono::sys_days{today})
        throw ValidationError("date_of_birth", "date_of_birth must be in the past");
    if (!std::isfinite(p.height_cm) || p.height_cm < kMinHeightCm || p.height_cm > kMaxHeightCm)
        throw ValidationError("height_cm", "height_cm must be between 30 and 272");
    if (!std::isfinite(p.weight_kg) || p.weight_kg < kMinWeightKg || p.weight_kg > kMaxWeightKg)
        throw ValidationError("weight_kg", "weight_kg must be between 1 and 650");
    if (p.phone && !is_valid_phone(*p.phone)) throw ValidationError("phone", "phone must be in E.164 form");
}

}  // namespace dengue
