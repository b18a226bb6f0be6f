#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dengue/core/time.hpp"

namespace dengue {

enum class Gender { Female, Male, Other };

std::string_view to_string(Gender g) noexcept;
std::optional<Gender> gender_from_string(std::string_view s) noexcept;

enum class Role { Patient, Operator };

std::string_view to_string(Role r) noexcept;
std::optional<Role> role_from_string(std::string_view s) noexcept;

inline constexpr double kMinHeightCm = 30.0;
inline constexpr double kMaxHeightCm = 272.0;
inline constexpr double kMinWeightKg = 1.0;
inline constexpr double kMaxWeightKg = 650.0;
inline constexpr std::size_t kMinPasswordLength = 8;

/// A registered user. `password_digest` is the only credential form ever held.
struct UserProfile {
    std::string user_id;
    std::string name;
    std::string email;
    std::string password_digest;
    Date date_of_birth{};
    Gender gender = Gender::Other;
    double height_cm = 0.0;
    double weight_kg = 0.0;
    Timestamp created_at{};
    Role role = Role::Patient;
    std::optional<std::string> phone;

    friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

/// One "@", non-empty local and domain parts, no whitespace.
bool is_valid_email(std::string_view email) noexcept;

/// E.164: "+" followed by 2..15 digits, first digit non-zero.
bool is_valid_phone(std::string_view phone) noexcept;

/// Lower-cases ASCII so that uniqueness is case-insensitive.
std::string normalize_email(std::string_view email);

/// Validates everything except the digest. Throws ValidationError.
void validate_profile(const UserProfile& profile, Date today);

}  // namespace dengue
