#include <sqlite3.h>

#include <mutex>

#include "dengue/core/errors.hpp"
#include "dengue/store/store.hpp"

namespace dengue::store {

namespace {

constexpr int kSchemaVersion = 1;

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users (
    user_id         TEXT PRIMARY KEY,
    email           TEXT NOT NULL UNIQUE,
    name            TEXT NOT NULL,
    password_digest TEXT NOT NULL,
    date_of_birth   TEXT NOT NULL,
    gender          TEXT NOT NULL,
    height_cm       REAL NOT NULL,
    weight_kg       REAL NOT NULL,
    created_at      INTEGER NOT NULL,
    role            TEXT NOT NULL,
    phone           TEXT UNIQUE
);
CREATE TABLE IF NOT EXISTS cases (
    case_id     TEXT PRIMARY KEY,
    user_id     TEXT NOT NULL REFERENCES users(user_id),
    latitude    REAL,
    longitude   REAL,
    reported_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS cases_by_user ON cases(user_id, reported_at);
CREATE INDEX IF NOT EXISTS cases_by_time ON cases(reported_at);
CREATE TABLE IF NOT EXISTS samples (
    user_id     TEXT NOT NULL,
    recorded_at INTEGER NOT NULL,
    latitude    REAL NOT NULL,
    longitude   REAL NOT NULL,
    PRIMARY KEY (user_id, recorded_at)
);
CREATE TABLE IF NOT EXISTS checks (
    id           INTEGER PRIMARY KEY AUTOINCREMENT,
    user_id      TEXT NOT NULL,
    symptoms     INTEGER NOT NULL,
    likely       INTEGER NOT NULL,
    evaluated_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS feedback (
    id              INTEGER PRIMARY KEY AUTOINCREMENT,
    user_id         TEXT NOT NULL,
    platelet_before INTEGER NOT NULL,
    platelet_after  INTEGER NOT NULL,
    before_date     TEXT NOT NULL,
    after_date      TEXT NOT NULL,
    submitted_at    INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS tokens (
    token_hash TEXT PRIMARY KEY,
    user_id    TEXT NOT NULL,
    issued_at  INTEGER NOT NULL,
    expires_at INTEGER NOT NULL,
    revoked    INTEGER NOT NULL DEFAULT 0
);
)sql";

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
            throw StorageError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;
    ~Statement() { sqlite3_finalize(stmt_); }

    Statement& bind(int index, const std::string& v) {
        check(sqlite3_bind_text(stmt_, index, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Statement& bind(int index, std::int64_t v) {
        check(sqlite3_bind_int64(stmt_, index, v));
        return *this;
    }
    Statement& bind(int index, double v) {
        check(sqlite3_bind_double(stmt_, index, v));
        return *this;
    }
    Statement& bind_null(int index) {
        check(sqlite3_bind_null(stmt_, index));
        return *this;
    }
    Statement& bind(int index, const std::optional<std::string>& v) { return v ? bind(index, *v) : bind_null(index); }

    /// True while a row is available.
    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        if (rc == SQLITE_CONSTRAINT) throw ConstraintViolation(sqlite3_errmsg(db_));
        throw StorageError(std::string("step failed: ") + sqlite3_errmsg(db_));
    }

    void run() {
        while (step()) {
        }
    }

    void reset() {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
    }

    std::string text(int col) const {
        auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string();
    }
    std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
    double real(int col) const { return sqlite3_column_double(stmt_, col); }
    bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }

    struct ConstraintViolation : StorageError {
        using StorageError::StorageError;
    };

private:
    void check(int rc) {
        if (rc != SQLITE_OK) throw StorageError(std::string("bind failed: ") + sqlite3_errmsg(db_));
    }

    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

class Transaction {
public:
    explicit Transaction(sqlite3* db) : db_(db) { exec("BEGIN IMMEDIATE"); }
    Transaction(const Transaction&) = delete;
    Transaction& operator=(const Transaction&) = delete;
    ~Transaction() {
        if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    }

    void commit() {
        exec("COMMIT");
        done_ = true;
    }

private:
    void exec(const char* sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown";
            sqlite3_free(err);
            throw StorageError(std::string(sql) + " failed: " + msg);
        }
    }

    sqlite3* db_;
    bool done_ = false;
};

constexpr const char* kUserColumns =
    "user_id, email, name, password_digest, date_of_birth, gender, height_cm, weight_kg, created_at, role, phone";

UserProfile read_user(const Statement& st) {
    UserProfile u;
    u.user_id = st.text(0);
    u.email = st.text(1);
    u.name = st.text(2);
    u.password_digest = st.text(3);
    u.date_of_birth = parse_date(st.text(4)).value_or(Date{});
    u.gender = gender_from_string(st.text(5)).value_or(Gender::Other);
    u.height_cm = st.real(6);
    u.weight_kg = st.real(7);
    u.created_at = from_unix_ms(st.integer(8));
    u.role = role_from_string(st.text(9)).value_or(Role::Patient);
    if (!st.is_null(10)) u.phone = st.text(10);
    return u;
}

constexpr const char* kCaseColumns = "case_id, user_id, latitude, longitude, reported_at";

CaseReport read_case(const Statement& st) {
    CaseReport c;
    c.case_id = st.text(0);
    c.user_id = st.text(1);
    if (!st.is_null(2) && !st.is_null(3)) c.point = geo::GeoPoint{st.real(2), st.real(3)};
    c.reported_at = from_unix_ms(st.integer(4));
    return c;
}

class SqliteStore final : public Store {
public:
    explicit SqliteStore(const std::string& path) {
        int rc = sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                                 nullptr);
        if (rc != SQLITE_OK) {
            std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
            sqlite3_close(db_);
            db_ = nullptr;
            throw StorageError("cannot open store '" + path + "': " + msg);
        }
        sqlite3_busy_timeout(db_, 5000);
        try {
            exec("PRAGMA journal_mode=WAL");
            exec("PRAGMA synchronous=FULL");
            exec("PRAGMA foreign_keys=ON");
            exec(kSchema);
            Statement version(db_, "PRAGMA user_version");
            version.step();
            auto found = version.integer(0);
            if (found == 0) {
                exec(("PRAGMA user_version=" + std::to_string(kSchemaVersion)).c_str());
            } else if (found != kSchemaVersion) {
                throw StorageError("unsupported store schema version " + std::to_string(found));
            }
        } catch (...) {
            sqlite3_close(db_);
            db_ = nullptr;
            throw;
        }
    }

    ~SqliteStore() override {
        if (db_) {
            sqlite3_exec(db_, "PRAGMA wal_checkpoint(TRUNCATE)", nullptr, nullptr, nullptr);
            sqlite3_close(db_);
        }
    }

    std::string create_user(UserProfile p) override {
        std::lock_guard lock(mu_);
        p.email = normalize_email(p.email);
        if (p.user_id.empty()) p.user_id = "usr_" + random_hex(16);
        Transaction tx(db_);
        {
            Statement dup(db_, "SELECT 1 FROM users WHERE email = ?");
            dup.bind(1, p.email);
            if (dup.step()) throw ConflictError("email", "email already registered");
        }
        if (p.phone) {
            Statement dup(db_, "SELECT 1 FROM users WHERE phone = ?");
            dup.bind(1, *p.phone);
            if (dup.step()) throw ConflictError("phone", "phone already linked");
        }
        Statement st(db_,
                     "INSERT INTO users (user_id, email, name, password_digest, date_of_birth, gender, height_cm, "
                     "weight_kg, created_at, role, phone) VALUES (?,?,?,?,?,?,?,?,?,?,?)");
        st.bind(1, p.user_id)
            .bind(2, p.email)
            .bind(3, p.name)
            .bind(4, p.password_digest)
            .bind(5, format_date(p.date_of_birth))
            .bind(6, std::string(to_string(p.gender)))
            .bind(7, p.height_cm)
            .bind(8, p.weight_kg)
            .bind(9, to_unix_ms(p.created_at))
            .bind(10, std::string(to_string(p.role)))
            .bind(11, p.phone);
        try {
            st.run();
        } catch (const Statement::ConstraintViolation&) {
            throw ConflictError("user_id", "user id already exists");
        }
        tx.commit();
        return p.user_id;
    }

    std::optional<UserProfile> get_user(const std::string& user_id) const override {
        return find_user("user_id", user_id);
    }

    std::optional<UserProfile> get_user_by_email(const std::string& email) const override {
        return find_user("email", normalize_email(email));
    }

    std::optional<UserProfile> get_user_by_phone(const std::string& phone) const override {
        return find_user("phone", phone);
    }

    void set_role(const std::string& user_id, Role role) override {
        std::lock_guard lock(mu_);
        Statement st(db_, "UPDATE users SET role = ? WHERE user_id = ?");
        st.bind(1, std::string(to_string(role))).bind(2, user_id);
        st.run();
        if (sqlite3_changes(db_) == 0) throw NotFoundError("unknown user " + user_id);
    }

    void link_phone(const std::string& user_id, const std::string& phone) override {
        std::lock_guard lock(mu_);
        Transaction tx(db_);
        {
            Statement owner(db_, "SELECT user_id FROM users WHERE phone = ?");
            owner.bind(1, phone);
            if (owner.step()) {
                if (owner.text(0) == user_id) return;
                throw ConflictError("phone", "phone already linked to another account");
            }
        }
        Statement st(db_, "UPDATE users SET phone = ? WHERE user_id = ?");
        st.bind(1, phone).bind(2, user_id);
        st.run();
        if (sqlite3_changes(db_) == 0) throw NotFoundError("unknown user " + user_id);
        tx.commit();
    }

    std::string insert_case(CaseReport report, std::chrono::milliseconds dedup_window) override {
        std::lock_guard lock(mu_);
        Transaction tx(db_);
        {
            Statement user(db_, "SELECT 1 FROM users WHERE user_id = ?");
            user.bind(1, report.user_id);
            if (!user.step()) throw NotFoundError("unknown user " + report.user_id);
        }
        {
            const auto at = to_unix_ms(report.reported_at);
            const auto window = dedup_window.count();
            Statement dup(db_, "SELECT 1 FROM cases WHERE user_id = ? AND reported_at > ? AND reported_at < ?");
            dup.bind(1, report.user_id).bind(2, at - window).bind(3, at + window);
            if (dup.step()) throw ConflictError("reported_at", "a case was already reported in this window");
        }
        if (report.case_id.empty()) report.case_id = "case_" + random_hex(16);
        Statement st(db_, "INSERT INTO cases (case_id, user_id, latitude, longitude, reported_at) VALUES (?,?,?,?,?)");
        st.bind(1, report.case_id).bind(2, report.user_id);
        if (report.point) {
            st.bind(3, report.point->latitude).bind(4, report.point->longitude);
        } else {
            st.bind_null(3).bind_null(4);
        }
        st.bind(5, to_unix_ms(report.reported_at));
        try {
            st.run();
        } catch (const Statement::ConstraintViolation&) {
            throw ConflictError("case_id", "case id already exists");
        }
        tx.commit();
        return report.case_id;
    }

    CaseReport attach_location(const std::string& case_id, const geo::GeoPoint& point) override {
        std::lock_guard lock(mu_);
        Transaction tx(db_);
        auto existing = find_case_locked(case_id);
        if (!existing) throw NotFoundError("unknown case " + case_id);
        if (existing->point) {
            if (*existing->point != point) throw ConflictError("location", "case already has a different location");
            return *existing;
        }
        Statement st(db_, "UPDATE cases SET latitude = ?, longitude = ? WHERE case_id = ?");
        st.bind(1, point.latitude).bind(2, point.longitude).bind(3, case_id);
        st.run();
        tx.commit();
        existing->point = point;
        return *existing;
    }

    std::optional<CaseReport> get_case(const std::string& case_id) const override {
        std::lock_guard lock(mu_);
        return find_case_locked(case_id);
    }

    std::vector<CaseReport> query_cases(const geo::BoundingBox& box, Timestamp from, Timestamp to) const override {
        std::lock_guard lock(mu_);
        std::string sql = std::string("SELECT ") + kCaseColumns +
                          " FROM cases WHERE latitude IS NOT NULL AND longitude IS NOT NULL"
                          " AND reported_at >= ? AND reported_at <= ? AND latitude >= ? AND latitude <= ?";
        sql += box.crosses_antimeridian() ? " AND (longitude >= ? OR longitude <= ?)"
                                          : " AND longitude >= ? AND longitude <= ?";
        sql += " ORDER BY reported_at, case_id";
        Statement st(db_, sql.c_str());
        st.bind(1, to_unix_ms(from))
            .bind(2, to_unix_ms(to))
            .bind(3, box.min_lat)
            .bind(4, box.max_lat)
            .bind(5, box.min_lon)
            .bind(6, box.max_lon);
        std::vector<CaseReport> out;
        while (st.step()) out.push_back(read_case(st));
        return out;
    }

    std::vector<CaseReport> all_cases() const override {
        std::lock_guard lock(mu_);
        Statement st(db_, (std::string("SELECT ") + kCaseColumns + " FROM cases ORDER BY reported_at, case_id").c_str());
        std::vector<CaseReport> out;
        while (st.step()) out.push_back(read_case(st));
        return out;
    }

    AppendResult append_samples(const std::string& user_id, std::span<const geo::LocationSample> samples,
                                Timestamp now) override {
        for (const auto& s : samples) geo::make_point(s.point.latitude, s.point.longitude);
        std::lock_guard lock(mu_);
        Transaction tx(db_);
        auto trace = load_trace_locked(user_id);
        AppendResult result;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (is_future(samples[i].recorded_at, now)) {
                result.rejected.push_back(i);
                continue;
            }
            trace.append(samples[i], now);
            ++result.accepted;
        }
        Statement clear(db_, "DELETE FROM samples WHERE user_id = ?");
        clear.bind(1, user_id);
        clear.run();
        Statement insert(db_, "INSERT INTO samples (user_id, recorded_at, latitude, longitude) VALUES (?,?,?,?)");
        for (const auto& s : trace.samples()) {
            insert.reset();
            insert.bind(1, user_id).bind(2, to_unix_ms(s.recorded_at)).bind(3, s.point.latitude).bind(4, s.point.longitude);
            insert.run();
        }
        tx.commit();
        return result;
    }

    geo::LocationTrace get_trace(const std::string& user_id) const override {
        std::lock_guard lock(mu_);
        return load_trace_locked(user_id);
    }

    void insert_check_event(const CheckEvent& e) override {
        std::lock_guard lock(mu_);
        Statement st(db_, "INSERT INTO checks (user_id, symptoms, likely, evaluated_at) VALUES (?,?,?,?)");
        st.bind(1, e.user_id)
            .bind(2, static_cast<std::int64_t>(e.symptoms.mask()))
            .bind(3, static_cast<std::int64_t>(e.likely_dengue))
            .bind(4, to_unix_ms(e.evaluated_at));
        st.run();
    }

    std::vector<CheckEvent> list_check_events() const override {
        std::lock_guard lock(mu_);
        Statement st(db_, "SELECT user_id, symptoms, likely, evaluated_at FROM checks ORDER BY id");
        std::vector<CheckEvent> out;
        while (st.step())
            out.push_back({st.text(0), SymptomSet::from_mask(static_cast<std::uint16_t>(st.integer(1))),
                           st.integer(2) != 0, from_unix_ms(st.integer(3))});
        return out;
    }

    void insert_feedback(const PlateletFeedback& fb) override {
        validate_feedback(fb);
        std::lock_guard lock(mu_);
        Statement st(db_,
                     "INSERT INTO feedback (user_id, platelet_before, platelet_after, before_date, after_date, "
                     "submitted_at) VALUES (?,?,?,?,?,?)");
        st.bind(1, fb.user_id)
            .bind(2, fb.platelet_before)
            .bind(3, fb.platelet_after)
            .bind(4, format_date(fb.before_date))
            .bind(5, format_date(fb.after_date))
            .bind(6, to_unix_ms(fb.submitted_at));
        st.run();
    }

    std::vector<PlateletFeedback> list_feedback() const override {
        std::lock_guard lock(mu_);
        Statement st(db_,
                     "SELECT user_id, platelet_before, platelet_after, before_date, after_date, submitted_at "
                     "FROM feedback ORDER BY id");
        std::vector<PlateletFeedback> out;
        while (st.step()) {
            PlateletFeedback fb;
            fb.user_id = st.text(0);
            fb.platelet_before = st.integer(1);
            fb.platelet_after = st.integer(2);
            fb.before_date = parse_date(st.text(3)).value_or(Date{});
            fb.after_date = parse_date(st.text(4)).value_or(Date{});
            fb.submitted_at = from_unix_ms(st.integer(5));
            out.push_back(fb);
        }
        return out;
    }

    void create_token(const AuthToken& token) override {
        std::lock_guard lock(mu_);
        Statement st(db_, "INSERT OR REPLACE INTO tokens (token_hash, user_id, issued_at, expires_at, revoked) "
                          "VALUES (?,?,?,?,0)");
        st.bind(1, sha256_hex(token.token))
            .bind(2, token.user_id)
            .bind(3, to_unix_ms(token.issued_at))
            .bind(4, to_unix_ms(token.expires_at));
        st.run();
    }

    std::optional<AuthToken> lookup_token(const std::string& token, Timestamp now) const override {
        std::lock_guard lock(mu_);
        Statement st(db_, "SELECT user_id, issued_at, expires_at FROM tokens WHERE token_hash = ? AND revoked = 0");
        st.bind(1, sha256_hex(token));
        if (!st.step()) return std::nullopt;
        AuthToken out{token, st.text(0), from_unix_ms(st.integer(1)), from_unix_ms(st.integer(2))};
        if (now >= out.expires_at) return std::nullopt;
        return out;
    }

    void revoke_token(const std::string& token) override {
        std::lock_guard lock(mu_);
        Statement st(db_, "UPDATE tokens SET revoked = 1 WHERE token_hash = ?");
        st.bind(1, sha256_hex(token));
        st.run();
    }

private:
    void exec(const char* sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown";
            sqlite3_free(err);
            throw StorageError(msg);
        }
    }

    std::optional<UserProfile> find_user(const char* column, const std::string& value) const {
        std::lock_guard lock(mu_);
        std::string sql = std::string("SELECT ") + kUserColumns + " FROM users WHERE " + column + " = ?";
        Statement st(db_, sql.c_str());
        st.bind(1, value);
        if (!st.step()) return std::nullopt;
        return read_user(st);
    }

    std::optional<CaseReport> find_case_locked(const std::string& case_id) const {
        Statement st(db_, (std::string("SELECT ") + kCaseColumns + " FROM cases WHERE case_id = ?").c_str());
        st.bind(1, case_id);
        if (!st.step()) return std::nullopt;
        return read_case(st);
    }

    geo::LocationTrace load_trace_locked(const std::string& user_id) const {
        Statement st(db_, "SELECT recorded_at, latitude, longitude FROM samples WHERE user_id = ? ORDER BY recorded_at");
        st.bind(1, user_id);
        std::vector<geo::LocationSample> samples;
        while (st.step()) samples.push_back({{st.real(1), st.real(2)}, from_unix_ms(st.integer(0))});
        return geo::LocationTrace::restore(user_id, samples);
    }

    mutable std::mutex mu_;
    sqlite3* db_ = nullptr;
};

}  // namespace

std::unique_ptr<Store> open_sqlite_store(const std::string& path) { return std::make_unique<SqliteStore>(path); }

}  // namespace dengue::store
