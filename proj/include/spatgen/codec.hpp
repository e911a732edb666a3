#pragma once

#include "spatgen/bit_io.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spatgen {

// J2735 MovementPhaseState, in enumeration-index order.
enum class MovementPhaseState : std::uint8_t {
    Unavailable = 0,
    Dark,
    StopThenProceed,
    StopAndRemain,
    PreMovement,
    PermissiveMovementAllowed,
    ProtectedMovementAllowed,
    PermissiveClearance,
    ProtectedClearance,
    CautionConflictingTraffic,
};

inline constexpr int kMovementPhaseStateCount = 10;

/// Label as printed in decoded dumps, e.g. "stop-And-Remain".
std::string_view to_label(MovementPhaseState state);
std::optional<MovementPhaseState> movement_phase_state_from_label(std::string_view label);

// TimeMark: tenths of a second within the hour. 36000 is the top of the hour;
// larger values are the standard's special codes (unknown, leap second, ...).
inline constexpr std::uint16_t kTimeMarkMax = 36011;
inline constexpr std::uint16_t kTimeMarkHour = 36000;

inline constexpr bool is_special_time_mark(std::uint16_t mark) { return mark > kTimeMarkHour; }

struct TimeChangeDetails {
    std::optional<std::uint16_t> start_time;
    std::uint16_t min_end_time = 0;
    std::optional<std::uint16_t> max_end_time;
    std::optional<std::uint16_t> likely_time;
    std::optional<std::uint8_t> confidence;  // 0..15
    std::optional<std::uint16_t> next_time;

    bool operator==(const TimeChangeDetails&) const = default;
};

struct MovementEvent {
    MovementPhaseState event_state = MovementPhaseState::Unavailable;
    std::optional<TimeChangeDetails> timing;

    bool operator==(const MovementEvent&) const = default;
};

struct MovementState {
    std::optional<std::string> movement_name;
    std::uint8_t signal_group = 0;
    std::vector<MovementEvent> events;  // 1..16

    bool operator==(const MovementState&) const = default;
};

// IntersectionStatusObject bit positions (bit 0 is the first bit on the wire).
enum class IntersectionStatusFlag : unsigned {
    ManualControlIsEnabled = 0,
    StopTimeIsActivated,
    FailureFlash,
    PreemptIsActive,
    SignalPriorityIsActive,
    FixedTimeOperation,
    TrafficDependentOperation,
    StandbyOperation,
    FailureMode,
    Off,
    RecentMapMessageUpdate,
    RecentChangeInMapAssignedLanesIdsUsed,
    NoValidMapIsAvailableAtThisTime,
    NoValidSpatIsAvailableAtThisTime,
};

struct IntersectionState {
    std::optional<std::string> name;
    std::optional<std::uint16_t> region;
    std::uint16_t id = 0;
    std::uint8_t revision = 0;  // 0..127
    std::uint16_t status = 0;   // raw 16-bit string, first wire bit is the MSB
    std::optional<std::uint32_t> moy;
    std::optional<std::uint16_t> dsecond;  // ms within the minute
    std::optional<std::vector<std::uint8_t>> enabled_lanes;
    std::vector<MovementState> movements;  // 1..255

    bool has_flag(IntersectionStatusFlag flag) const noexcept {
        return (status >> (15 - static_cast<unsigned>(flag))) & 1u;
    }

    bool operator==(const IntersectionState&) const = default;
};

inline constexpr std::uint32_t kMinuteOfYearMax = 527040;

struct SpatMessage {
    std::uint32_t message_id = 19;
    std::optional<std::uint32_t> moy;
    std::optional<std::string> name;
    std::vector<IntersectionState> intersections;  // 1..32

    bool operator==(const SpatMessage&) const = default;
};

/// Decodes a complete UPER MessageFrame carrying a SPAT.
SpatMessage decode_spat(std::span<const std::uint8_t> payload);

/// Encodes a MessageFrame carrying the SPAT; the final byte is zero-padded.
std::vector<std::uint8_t> encode_spat(const SpatMessage& message);

// Key/value text form of a decoded message, field names as in reference dumps.
std::string to_decoded_text(const SpatMessage& message);
SpatMessage from_decoded_text(std::string_view text);

}  // namespace spatgen
