#include "dengue/geo/trace.hpp"

#include <algorithm>

#include "dengue/core/errors.hpp"

namespace dengue::geo {

namespace {

auto hour_of(Timestamp t) { return std::chrono::floor<std::chrono::hours>(t); }

}  // namespace

void LocationTrace::append(const LocationSample& sample, Timestamp now) {
    make_point(sample.point.latitude, sample.point.longitude);
    if (is_future(sample.recorded_at, now))
        throw ValidationError("recorded_at", "recorded_at must not be in the future");
    insert_unchecked(sample);
}

void LocationTrace::insert_unchecked(const LocationSample& sample) {
    const auto hour = hour_of(sample.recorded_at);
    // First sample whose hour is not earlier than the new one.
    auto it = std::lower_bound(samples_.begin(), samples_.end(), hour,
                               [](const LocationSample& s, auto h) { return hour_of(s.recorded_at) < h; });
    if (it != samples_.end() && hour_of(it->recorded_at) == hour) {
        *it = sample;
        return;
    }
    if (samples_.size() == kCapacity && it == samples_.begin()) return;  // older than the whole window
    samples_.insert(it, sample);
    if (samples_.size() > kCapacity)
        samples_.erase(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(samples_.size() - kCapacity));
}

std::vector<LocationSample> LocationTrace::window(Timestamp from, Timestamp to) const {
    if (from > to) throw ValidationError("from", "from must not be after to");
    auto lo = std::lower_bound(samples_.begin(), samples_.end(), from,
                               [](const LocationSample& s, Timestamp t) { return s.recorded_at < t; });
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), to,
                               [](Timestamp t, const LocationSample& s) { return t < s.recorded_at; });
    return {lo, hi};
}

LocationTrace LocationTrace::restore(std::string user_id, std::span<const LocationSample> samples) {
    LocationTrace trace(std::move(user_id));
    for (const auto& s : samples) trace.insert_unchecked(s);
    return trace;
}

LocationTrace trace_append(LocationTrace trace, const LocationSample& sample, Timestamp now) {
    trace.append(sample, now);
    return trace;
}

std::vector<LocationSample> trace_window(const LocationTrace& trace, Timestamp from, Timestamp to) {
    return trace.window(from, to);
}

}  // namespace dengue::geo
