#include "spatgen/spat_state.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace spatgen {

using nlohmann::ordered_json;

std::string_view to_string(LightColor color) {
    switch (color) {
        case LightColor::Green: return "Green";
        case LightColor::Yellow: return "Yellow";
        case LightColor::Red: return "Red";
        case LightColor::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<LightColor> light_color_from_string(std::string_view text) {
    for (auto c : {LightColor::Green, LightColor::Yellow, LightColor::Red, LightColor::Unknown}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

const char* to_string(SpatStateErrc kind) {
    switch (kind) {
        case SpatStateErrc::SpecialTimeMark: return "SpecialTimeMark";
        case SpatStateErrc::MissingTimestamp: return "MissingTimestamp";
        case SpatStateErrc::NoSuchIntersection: return "NoSuchIntersection";
        case SpatStateErrc::BadSnapshotText: return "BadSnapshotText";
    }
    return "?";
}

double remaining_seconds(std::uint16_t min_end_time, std::uint32_t moy, std::uint16_t dsecond) {
    if (is_special_time_mark(min_end_time)) {
        throw SpatStateError(SpatStateErrc::SpecialTimeMark,
                             "minEndTime " + std::to_string(min_end_time) + " is a special time mark");
    }
    // Integer milliseconds keep values like 29.592 exact before the final division.
    constexpr std::int64_t hour_ms = 3'600'000;
    const std::int64_t now_ms = std::int64_t{moy % 60} * 60'000 + dsecond;
    std::int64_t diff = std::int64_t{min_end_time} * 100 - now_ms;
    diff %= hour_ms;
    if (diff < 0) diff += hour_ms;
    return static_cast<double>(diff) / 1000.0;
}

LightColor color_of(MovementPhaseState state) {
    switch (state) {
        case MovementPhaseState::ProtectedMovementAllowed:
        case MovementPhaseState::PermissiveMovementAllowed:
            return LightColor::Green;
        case MovementPhaseState::ProtectedClearance:
        case MovementPhaseState::PermissiveClearance:
        case MovementPhaseState::CautionConflictingTraffic:
            return LightColor::Yellow;
        case MovementPhaseState::StopAndRemain:
        case MovementPhaseState::StopThenProceed:
        case MovementPhaseState::PreMovement:
            return LightColor::Red;
        case MovementPhaseState::Dark:
        case MovementPhaseState::Unavailable:
            return LightColor::Unknown;
    }
    return LightColor::Unknown;
}

SignalSnapshot snapshot(const SpatMessage& message, std::size_t index, const SnapshotOptions& opts) {
    if (index >= message.intersections.size()) {
        throw SpatStateError(SpatStateErrc::NoSuchIntersection,
                             "message has no intersection at index " + std::to_string(index));
    }
    const auto& inter = message.intersections[index];
    const auto moy = message.moy ? message.moy : inter.moy;
    if (!moy || !inter.dsecond) {
        throw SpatStateError(SpatStateErrc::MissingTimestamp,
                             std::string("intersection ") + std::to_string(inter.id) + " lacks " +
                                 (!inter.dsecond ? "timeStamp (DSecond)" : "minute of the year"));
    }

    SignalSnapshot snap;
    snap.intersection_id = inter.id;
    if (auto it = opts.labels.find(inter.id); it != opts.labels.end()) {
        snap.intersection_label = it->second;
    } else {
        snap.intersection_label = std::to_string(inter.id);
    }
    snap.moy = *moy;
    snap.dsecond = *inter.dsecond;
    snap.minute_of_hour = static_cast<int>(*moy % 60);
    snap.second_of_minute = *inter.dsecond / 1000.0;

    for (const auto& movement : inter.movements) {
        GroupState g;
        const auto& current = movement.events.front();
        g.state = current.event_state;
        if (current.timing && !is_special_time_mark(current.timing->min_end_time)) {
            g.remaining = remaining_seconds(current.timing->min_end_time, *moy, *inter.dsecond);
        }
        for (std::size_t i = 1; i < movement.events.size(); ++i) {
            const auto& ev = movement.events[i];
            UpcomingEvent next{ev.event_state, std::nullopt};
            if (ev.timing) next.min_end_time = ev.timing->min_end_time;
            g.next_states.push_back(next);
        }
        snap.groups[movement.signal_group] = std::move(g);
    }
    return snap;
}

SignalSnapshot snapshot(const SpatMessage& message, const SnapshotOptions& opts) {
    return snapshot(message, 0, opts);
}

std::string display_time(const SignalSnapshot& snap, int tz_offset_min) {
    constexpr std::int64_t day_ms = 86'400'000;
    std::int64_t ms = std::int64_t{snap.moy % 1440} * 60'000 + snap.dsecond +
                      std::int64_t{tz_offset_min} * 60'000;
    ms = ((ms % day_ms) + day_ms) % day_ms;
    const std::int64_t secs = ((ms + 500) / 1000) % 86'400;
    const int hour = static_cast<int>(secs / 3600);
    const int minute = static_cast<int>(secs / 60 % 60);
    const int second = static_cast<int>(secs % 60);
    const int hour12 = hour % 12 == 0 ? 12 : hour % 12;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d %s", hour12, minute, second, hour < 12 ? "AM" : "PM");
    return buf;
}

namespace {

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

std::string group_key(std::uint8_t group) { return "Signal Group " + std::to_string(group); }

[[noreturn]] void bad_text(const std::string& why) {
    throw SpatStateError(SpatStateErrc::BadSnapshotText, "snapshot text: " + why);
}

}  // namespace

std::string to_snapshot_text(const SignalSnapshot& snap, int tz_offset_min) {
    ordered_json doc = ordered_json::object();
    doc["intersection"] = snap.intersection_label;
    doc["id"] = snap.intersection_id;
    doc["timestamp"] = display_time(snap, tz_offset_min);
    doc["moy"] = snap.moy;
    doc["dsecond"] = snap.dsecond;
    doc["minute"] = snap.minute_of_hour;
    doc["second"] = snap.second_of_minute;

    ordered_json groups = ordered_json::object();
    ordered_json next = ordered_json::object();
    for (const auto& [group, g] : snap.groups) {
        ordered_json entry = ordered_json::array();
        entry.push_back(std::string(to_label(g.state)));
        if (g.remaining) {
            entry.push_back(round3(*g.remaining));
        } else {
            entry.push_back(nullptr);
        }
        groups[group_key(group)] = std::move(entry);
        if (!g.next_states.empty()) {
            ordered_json list = ordered_json::array();
            for (const auto& ev : g.next_states) {
                ordered_json item = ordered_json::array();
                item.push_back(std::string(to_label(ev.state)));
                if (ev.min_end_time) {
                    item.push_back(*ev.min_end_time);
                } else {
                    item.push_back(nullptr);
                }
                list.push_back(std::move(item));
            }
            next[group_key(group)] = std::move(list);
        }
    }
    doc["groups"] = std::move(groups);
    if (!next.empty()) doc["next_states"] = std::move(next);
    return doc.dump();
}

SignalSnapshot from_snapshot_text(std::string_view text) {
    ordered_json doc = ordered_json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad_text("not a JSON object");
    SignalSnapshot snap;
    try {
        snap.intersection_label = doc.at("intersection").get<std::string>();
        snap.intersection_id = doc.at("id").get<std::uint16_t>();
        snap.moy = doc.at("moy").get<std::uint32_t>();
        snap.dsecond = doc.at("dsecond").get<std::uint16_t>();
        snap.minute_of_hour = static_cast<int>(snap.moy % 60);
        snap.second_of_minute = snap.dsecond / 1000.0;

        const auto parse_group = [](const std::string& key) {
            constexpr std::string_view prefix = "Signal Group ";
            if (key.rfind(prefix, 0) != 0) bad_text("unexpected group key '" + key + "'");
            const int group = std::stoi(key.substr(prefix.size()));
            if (group < 0 || group > 255) bad_text("signal group out of range");
            return static_cast<std::uint8_t>(group);
        };
        const auto parse_state = [](const ordered_json& label) {
            auto state = movement_phase_state_from_label(label.get<std::string>());
            if (!state) bad_text("unknown event state '" + label.get<std::string>() + "'");
            return *state;
        };

        for (const auto& [key, entry] : doc.at("groups").items()) {
            if (!entry.is_array() || entry.size() != 2) bad_text("group entry must be [state, remaining]");
            GroupState g;
            g.state = parse_state(entry[0]);
            if (!entry[1].is_null()) g.remaining = entry[1].get<double>();
            snap.groups[parse_group(key)] = std::move(g);
        }
        if (auto next = doc.find("next_states"); next != doc.end()) {
            for (const auto& [key, list] : next->items()) {
                auto it = snap.groups.find(parse_group(key));
                if (it == snap.groups.end()) bad_text("next_states for unknown group " + key);
                for (const auto& item : list) {
                    UpcomingEvent ev{parse_state(item.at(0)), std::nullopt};
                    if (!item.at(1).is_null()) ev.min_end_time = item.at(1).get<std::uint16_t>();
                    it->second.next_states.push_back(ev);
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        bad_text(e.what());
    } catch (const std::logic_error& e) {
        bad_text(e.what());
    }
    return snap;
}

}  // namespace spatgen
