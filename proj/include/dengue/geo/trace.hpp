#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dengue/core/time.hpp"
#include "dengue/geo/geo_point.hpp"

namespace dengue::geo {

struct LocationSample {
    GeoPoint point;
    Timestamp recorded_at{};

    friend bool operator==(const LocationSample&, const LocationSample&) = default;
};

/// Per-user rolling window of hourly position samples.
///
/// Holds at most kCapacity samples (20 days of hourly fixes), strictly ordered
/// by recorded_at. At most one sample is kept per UTC hour; a later append
/// for an occupied hour replaces the earlier sample. When full, the oldest
/// samples are overwritten.
class LocationTrace {
public:
    static constexpr std::size_t kCapacity = 20 * 24;

    LocationTrace() = default;
    explicit LocationTrace(std::string user_id) : user_id_(std::move(user_id)) {}

    /// Throws ValidationError("recorded_at") for a sample dated after `now`
    /// (beyond the clock-skew allowance) and OutOfRangeError for bad
    /// coordinates. The trace is unchanged on error.
    void append(const LocationSample& sample, Timestamp now);

    /// Samples with from <= recorded_at <= to, oldest first.
    /// Throws ValidationError when from > to.
    std::vector<LocationSample> window(Timestamp from, Timestamp to) const;

    const std::string& user_id() const noexcept { return user_id_; }
    std::span<const LocationSample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    /// Rebuilds a trace from persisted samples, re-applying the ordering,
    /// hour-dedup and capacity rules.
    static LocationTrace restore(std::string user_id, std::span<const LocationSample> samples);

    friend bool operator==(const LocationTrace&, const LocationTrace&) = default;

private:
    void insert_unchecked(const LocationSample& sample);

    std::string user_id_;
    std::vector<LocationSample> samples_;
};

/// Value-returning form of LocationTrace::append.
LocationTrace trace_append(LocationTrace trace, const LocationSample& sample, Timestamp now);

std::vector<LocationSample> trace_window(const LocationTrace& trace, Timestamp from, Timestamp to);

}  // namespace dengue::geo
