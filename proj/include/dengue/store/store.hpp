#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dengue/core/classifier.hpp"
#include "dengue/core/feedback.hpp"
#include "dengue/core/profile.hpp"
#include "dengue/core/time.hpp"
#include "dengue/geo/geo_point.hpp"
#include "dengue/geo/trace.hpp"

namespace dengue::store {

/// Default window within which a second report from the same user is a duplicate.
inline constexpr std::chrono::days kDefaultDedupWindow{14};

struct CaseReport {
    std::string case_id;
    std::string user_id;
    std::optional<geo::GeoPoint> point;
    Timestamp reported_at{};

    /// True until a location has been attached.
    bool location_pending() const noexcept { return !point.has_value(); }

    friend bool operator==(const CaseReport&, const CaseReport&) = default;
};

struct AuthToken {
    std::string token;
    std::string user_id;
    Timestamp issued_at{};
    Timestamp expires_at{};

    friend bool operator==(const AuthToken&, const AuthToken&) = default;
};

struct CheckEvent {
    std::string user_id;
    SymptomSet symptoms;
    bool likely_dengue = false;
    Timestamp evaluated_at{};

    friend bool operator==(const CheckEvent&, const CheckEvent&) = default;
};

struct AppendResult {
    std::size_t accepted = 0;
    std::vector<std::size_t> rejected;  // indices of future-dated samples
};

/// Persistence for every entity the service owns.
///
/// Implementations are safe to share between threads. Any write that returns
/// normally is durable for the backend's lifetime guarantee (process lifetime
/// for the memory backend, crash-safe for the file backend). Ids left empty
/// on input are generated.
class Store {
public:
    virtual ~Store() = default;

    // users
    /// Throws ConflictError("email") on a duplicate (case-insensitive) email,
    /// ConflictError("phone") on a phone already linked elsewhere.
    virtual std::string create_user(UserProfile profile) = 0;
    virtual std::optional<UserProfile> get_user(const std::string& user_id) const = 0;
    virtual std::optional<UserProfile> get_user_by_email(const std::string& email) const = 0;
    virtual std::optional<UserProfile> get_user_by_phone(const std::string& phone) const = 0;
    virtual void set_role(const std::string& user_id, Role role) = 0;
    virtual void link_phone(const std::string& user_id, const std::string& phone) = 0;

    // cases
    /// Throws ConflictError("reported_at") when the user already has a case
    /// within `dedup_window` of report.reported_at.
    virtual std::string insert_case(CaseReport report, std::chrono::milliseconds dedup_window) = 0;
    /// Sets the location of a pending case. Re-attaching an identical point is
    /// a no-op; a different point throws ConflictError.
    virtual CaseReport attach_location(const std::string& case_id, const geo::GeoPoint& point) = 0;
    virtual std::optional<CaseReport> get_case(const std::string& case_id) const = 0;
    /// Located cases inside `box` with reported_at in [from, to], ordered by
    /// (reported_at, case_id).
    virtual std::vector<CaseReport> query_cases(const geo::BoundingBox& box, Timestamp from, Timestamp to) const = 0;
    /// Every case, pending ones included, ordered by (reported_at, case_id).
    virtual std::vector<CaseReport> all_cases() const = 0;

    // traces
    /// Merges samples into the user's trace. Future-dated samples are skipped
    /// and reported by index; other invalid samples throw before any change.
    virtual AppendResult append_samples(const std::string& user_id, std::span<const geo::LocationSample> samples,
                                        Timestamp now) = 0;
    virtual geo::LocationTrace get_trace(const std::string& user_id) const = 0;

    // symptom checks and feedback
    virtual void insert_check_event(const CheckEvent& event) = 0;
    virtual std::vector<CheckEvent> list_check_events() const = 0;
    virtual void insert_feedback(const PlateletFeedback& feedback) = 0;
    virtual std::vector<PlateletFeedback> list_feedback() const = 0;

    // tokens
    virtual void create_token(const AuthToken& token) = 0;
    /// Returns the token only if it exists, is not revoked and has not expired.
    virtual std::optional<AuthToken> lookup_token(const std::string& token, Timestamp now) const = 0;
    virtual void revoke_token(const std::string& token) = 0;
};

/// Volatile backend for tests and throwaway servers.
std::unique_ptr<Store> make_memory_store();

/// Single-file SQLite backend. Throws StorageError if the file cannot be opened.
std::unique_ptr<Store> open_sqlite_store(const std::string& path);

/// ":memory:" selects the memory backend, anything else is a SQLite path.
std::unique_ptr<Store> open_store(const std::string& location);

/// Hex string of `bytes` cryptographically random bytes.
std::string random_hex(std::size_t bytes);

/// Lower-case hex SHA-256 of `data`. Tokens are stored only in this form.
std::string sha256_hex(std::string_view data);

}  // namespace dengue::store
