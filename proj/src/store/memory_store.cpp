#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "dengue/core/errors.hpp"
#include "dengue/store/store.hpp"

namespace dengue::store {

namespace {

bool case_order(const CaseReport& a, const CaseReport& b) {
    return std::tie(a.reported_at, a.case_id) < std::tie(b.reported_at, b.case_id);
}

class MemoryStore final : public Store {
public:
    std::string create_user(UserProfile profile) override {
        std::unique_lock lock(mu_);
        profile.email = normalize_email(profile.email);
        if (by_email_.contains(profile.email)) throw ConflictError("email", "email already registered");
        if (profile.phone && by_phone_.contains(*profile.phone))
            throw ConflictError("phone", "phone already linked");
        if (profile.user_id.empty()) profile.user_id = "usr_" + random_hex(16);
        if (users_.contains(profile.user_id)) throw ConflictError("user_id", "user id already exists");
        by_email_[profile.email] = profile.user_id;
        if (profile.phone) by_phone_[*profile.phone] = profile.user_id;
        auto id = profile.user_id;
        users_.emplace(id, std::move(profile));
        return id;
    }

    std::optional<UserProfile> get_user(const std::string& user_id) const override {
        std::shared_lock lock(mu_);
        auto it = users_.find(user_id);
        if (it == users_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<UserProfile> get_user_by_email(const std::string& email) const override {
        std::shared_lock lock(mu_);
        auto it = by_email_.find(normalize_email(email));
        if (it == by_email_.end()) return std::nullopt;
        return users_.at(it->second);
    }

    std::optional<UserProfile> get_user_by_phone(const std::string& phone) const override {
        std::shared_lock lock(mu_);
        auto it = by_phone_.find(phone);
        if (it == by_phone_.end()) return std::nullopt;
        return users_.at(it->second);
    }

    void set_role(const std::string& user_id, Role role) override {
        std::unique_lock lock(mu_);
        user_ref(user_id).role = role;
    }

    void link_phone(const std::string& user_id, const std::string& phone) override {
        std::unique_lock lock(mu_);
        auto& user = user_ref(user_id);
        if (auto it = by_phone_.find(phone); it != by_phone_.end()) {
            if (it->second == user_id) return;
            throw ConflictError("phone", "phone already linked to another account");
        }
        if (user.phone) by_phone_.erase(*user.phone);
        user.phone = phone;
        by_phone_[phone] = user_id;
    }

    std::string insert_case(CaseReport report, std::chrono::milliseconds dedup_window) override {
        std::unique_lock lock(mu_);
        user_ref(report.user_id);
        for (const auto& [id, existing] : cases_) {
            if (existing.user_id != report.user_id) continue;
            auto gap = existing.reported_at > report.reported_at ? existing.reported_at - report.reported_at
                                                                 : report.reported_at - existing.reported_at;
            if (gap < dedup_window) throw ConflictError("reported_at", "a case was already reported in this window");
        }
        if (report.case_id.empty()) report.case_id = "case_" + random_hex(16);
        if (cases_.contains(report.case_id)) throw ConflictError("case_id", "case id already exists");
        auto id = report.case_id;
        cases_.emplace(id, std::move(report));
        return id;
    }

    CaseReport attach_location(const std::string& case_id, const geo::GeoPoint& point) override {
        std::unique_lock lock(mu_);
        auto it = cases_.find(case_id);
        if (it == cases_.end()) throw NotFoundError("unknown case " + case_id);
        auto& report = it->second;
        if (report.point && *report.point != point)
            throw ConflictError("location", "case already has a different location");
        report.point = point;
        return report;
    }

    std::optional<CaseReport> get_case(const std::string& case_id) const override {
        std::shared_lock lock(mu_);
        auto it = cases_.find(case_id);
        if (it == cases_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<CaseReport> query_cases(const geo::BoundingBox& box, Timestamp from, Timestamp to) const override {
        std::shared_lock lock(mu_);
        std::vector<CaseReport> out;
        for (const auto& [id, c] : cases_)
            if (c.point && box.contains(*c.point) && c.reported_at >= from && c.reported_at <= to) out.push_back(c);
        std::sort(out.begin(), out.end(), case_order);
        return out;
    }

    std::vector<CaseReport> all_cases() const override {
        std::shared_lock lock(mu_);
        std::vector<CaseReport> out;
        for (const auto& [id, c] : cases_) out.push_back(c);
        std::sort(out.begin(), out.end(), case_order);
        return out;
    }

    AppendResult append_samples(const std::string& user_id, std::span<const geo::LocationSample> samples,
                                Timestamp now) override {
        for (const auto& s : samples) geo::make_point(s.point.latitude, s.point.longitude);
        auto slot = trace_slot(user_id);
        std::lock_guard lock(slot->mu);
        AppendResult result;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (is_future(samples[i].recorded_at, now)) {
                result.rejected.push_back(i);
                continue;
            }
            slot->trace.append(samples[i], now);
            ++result.accepted;
        }
        return result;
    }

    geo::LocationTrace get_trace(const std::string& user_id) const override {
        std::shared_ptr<TraceSlot> slot;
        {
            std::shared_lock lock(traces_mu_);
            auto it = traces_.find(user_id);
            if (it == traces_.end()) return geo::LocationTrace(user_id);
            slot = it->second;
        }
        std::lock_guard lock(slot->mu);
        return slot->trace;
    }

    void insert_check_event(const CheckEvent& event) override {
        std::unique_lock lock(mu_);
        checks_.push_back(event);
    }

    std::vector<CheckEvent> list_check_events() const override {
        std::shared_lock lock(mu_);
        return checks_;
    }

    void insert_feedback(const PlateletFeedback& feedback) override {
        validate_feedback(feedback);
        std::unique_lock lock(mu_);
        feedback_.push_back(feedback);
    }

    std::vector<PlateletFeedback> list_feedback() const override {
        std::shared_lock lock(mu_);
        return feedback_;
    }

    void create_token(const AuthToken& token) override {
        std::unique_lock lock(mu_);
        auto stored = token;
        stored.token.clear();
        tokens_[sha256_hex(token.token)] = TokenRow{std::move(stored), false};
    }

    std::optional<AuthToken> lookup_token(const std::string& token, Timestamp now) const override {
        std::shared_lock lock(mu_);
        auto it = tokens_.find(sha256_hex(token));
        if (it == tokens_.end() || it->second.revoked || now >= it->second.token.expires_at) return std::nullopt;
        auto out = it->second.token;
        out.token = token;
        return out;
    }

    void revoke_token(const std::string& token) override {
        std::unique_lock lock(mu_);
        if (auto it = tokens_.find(sha256_hex(token)); it != tokens_.end()) it->second.revoked = true;
    }

private:
    struct TraceSlot {
        std::mutex mu;
        geo::LocationTrace trace;
    };

    struct TokenRow {
        AuthToken token;
        bool revoked = false;
    };

    UserProfile& user_ref(const std::string& user_id) {
        auto it = users_.find(user_id);
        if (it == users_.end()) throw NotFoundError("unknown user " + user_id);
        return it->second;
    }

    std::shared_ptr<TraceSlot> trace_slot(const std::string& user_id) {
        {
            std::shared_lock lock(traces_mu_);
            if (auto it = traces_.find(user_id); it != traces_.end()) return it->second;
        }
        std::unique_lock lock(traces_mu_);
        auto& slot = traces_[user_id];
        if (!slot) {
            slot = std::make_shared<TraceSlot>();
            slot->trace = geo::LocationTrace(user_id);
        }
        return slot;
    }

    mutable std::shared_mutex mu_;
    std::map<std::string, UserProfile> users_;
    std::map<std::string, std::string> by_email_;
    std::map<std::string, std::string> by_phone_;
    std::map<std::string, CaseReport> cases_;
    std::vector<CheckEvent> checks_;
    std::vector<PlateletFeedback> feedback_;
    std::map<std::string, TokenRow> tokens_;

    mutable std::shared_mutex traces_mu_;
    std::map<std::string, std::shared_ptr<TraceSlot>> traces_;
};

}  // namespace

std::unique_ptr<Store> make_memory_store() { return std::make_unique<MemoryStore>(); }

std::unique_ptr<Store> open_store(const std::string& location) {
    if (location == ":memory:") return make_memory_store();
    return open_sqlite_store(location);
}

}  // namespace dengue::store
