#pragma once

#include "spatgen/codec.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatgen {

enum class LightColor { Green, Yellow, Red, Unknown };

std::string_view to_string(LightColor color);
std::optional<LightColor> light_color_from_string(std::string_view text);

enum class SpatStateErrc { SpecialTimeMark, MissingTimestamp, NoSuchIntersection, BadSnapshotText };

class SpatStateError : public std::runtime_error {
public:
    SpatStateError(SpatStateErrc kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    SpatStateErrc kind() const noexcept { return kind_; }

private:
    SpatStateErrc kind_;
};

const char* to_string(SpatStateErrc kind);

/// Seconds from the message instant until `min_end_time` (a TimeMark), wrapped
/// into [0, 3600) when the event ends in the next hour. Throws SpecialTimeMark
/// for marks above 36000.
double remaining_seconds(std::uint16_t min_end_time, std::uint32_t moy, std::uint16_t dsecond);

LightColor color_of(MovementPhaseState state);

struct UpcomingEvent {
    MovementPhaseState state = MovementPhaseState::Unavailable;
    std::optional<std::uint16_t> min_end_time;

    bool operator==(const UpcomingEvent&) const = default;
};

struct GroupState {
    MovementPhaseState state = MovementPhaseState::Unavailable;
    // Empty when the event carries no timing or a special time mark.
    std::optional<double> remaining;
    std::vector<UpcomingEvent> next_states;

    bool operator==(const GroupState&) const = default;
};

struct SignalSnapshot {
    std::string intersection_label;
    std::uint16_t intersection_id = 0;
    std::uint32_t moy = 0;
    std::uint16_t dsecond = 0;
    int minute_of_hour = 0;
    double second_of_minute = 0.0;
    std::map<std::uint8_t, GroupState> groups;

    // Milliseconds since the start of the year; orders snapshots in a stream.
    std::int64_t time_ms() const noexcept {
        return std::int64_t{moy} * 60000 + std::int64_t{dsecond};
    }

    bool operator==(const SignalSnapshot&) const = default;
};

struct SnapshotOptions {
    std::map<std::uint16_t, std::string> labels;  // intersection id -> display name
    int tz_offset_min = 0;                        // applied to the displayed hour only
};

/// Snapshot of the intersection at `index`. The minute of the year comes from
/// the SPAT header, falling back to the intersection's own moy.
SignalSnapshot snapshot(const SpatMessage& message, std::size_t index, const SnapshotOptions& opts = {});
SignalSnapshot snapshot(const SpatMessage& message, const SnapshotOptions& opts = {});

/// "HH:MM:SS AM" wall-clock label; seconds rounded to the nearest whole second.
std::string display_time(const SignalSnapshot& snap, int tz_offset_min);

// One record per snapshot: intersection, timestamp, then the signal groups in
// ascending order, each as [state, remaining] with remaining at 3 decimals.
std::string to_snapshot_text(const SignalSnapshot& snap, int tz_offset_min = 0);
SignalSnapshot from_snapshot_text(std::string_view text);

}  // namespace spatgen
