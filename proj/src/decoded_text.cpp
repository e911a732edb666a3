#include "spatgen/codec.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

namespace spatgen {

using nlohmann::ordered_json;

namespace {

ordered_json timing_to_json(const TimeChangeDetails& t) {
    ordered_json j = ordered_json::object();
    if (t.start_time) j["startTime"] = *t.start_time;
    j["minEndTime"] = t.min_end_time;
    if (t.max_end_time) j["maxEndTime"] = *t.max_end_time;
    if (t.likely_time) j["likelyTime"] = *t.likely_time;
    if (t.confidence) j["confidence"] = *t.confidence;
    if (t.next_time) j["nextTime"] = *t.next_time;
    return j;
}

ordered_json intersection_to_json(const IntersectionState& s) {
    ordered_json j = ordered_json::object();
    if (s.name) j["name"] = *s.name;
    if (s.moy) j["moy"] = *s.moy;
    if (s.dsecond) j["timeStamp"] = *s.dsecond;
    ordered_json id = ordered_json::object();
    if (s.region) id["region"] = *s.region;
    id["id"] = s.id;
    j["id"] = std::move(id);
    j["revision"] = s.revision;
    char status[5];
    std::snprintf(status, sizeof status, "%04x", static_cast<unsigned>(s.status));
    j["status"] = status;
    if (s.enabled_lanes) j["enabledLanes"] = *s.enabled_lanes;
    ordered_json states = ordered_json::array();
    for (const auto& m : s.movements) {
        ordered_json mj = ordered_json::object();
        if (m.movement_name) mj["movementName"] = *m.movement_name;
        ordered_json events = ordered_json::array();
        for (const auto& ev : m.events) {
            ordered_json ej = ordered_json::object();
            ej["eventState"] = std::string(to_label(ev.event_state));
            if (ev.timing) ej["timing"] = timing_to_json(*ev.timing);
            events.push_back(std::move(ej));
        }
        mj["state-time-speed"] = std::move(events);
        mj["signalGroup"] = m.signal_group;
        states.push_back(std::move(mj));
    }
    j["states"] = std::move(states);
    return j;
}

[[noreturn]] void bad(const std::string& why) {
    throw std::invalid_argument("decoded text: " + why);
}

const ordered_json& member(const ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(std::string("missing '") + key + "'");
    return *it;
}

template <typename T>
T as_uint(const ordered_json& v, std::int64_t hi, const char* key) {
    if (!v.is_number_integer()) bad(std::string("'") + key + "' is not an integer");
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x > hi) bad(std::string("'") + key + "' out of range");
    return static_cast<T>(x);
}

template <typename T>
std::optional<T> opt_uint(const ordered_json& obj, const char* key, std::int64_t hi) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    return as_uint<T>(*it, hi, key);
}

std::optional<std::string> opt_string(const ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) bad(std::string("'") + key + "' is not a string");
    return it->get<std::string>();
}

IntersectionState intersection_from_json(const ordered_json& j) {
    if (!j.is_object()) bad("intersection is not an object");
    IntersectionState s;
    s.name = opt_string(j, "name");
    s.moy = opt_uint<std::uint32_t>(j, "moy", kMinuteOfYearMax);
    s.dsecond = opt_uint<std::uint16_t>(j, "timeStamp", 65535);
    const auto& id = member(j, "id");
    s.region = opt_uint<std::uint16_t>(id, "region", 65535);
    s.id = as_uint<std::uint16_t>(member(id, "id"), 65535, "id");
    s.revision = as_uint<std::uint8_t>(member(j, "revision"), 127, "revision");
    const auto& status = member(j, "status");
    if (!status.is_string() || status.get<std::string>().size() != 4) bad("'status' must be 4 hex digits");
    try {
        std::size_t used = 0;
        s.status = static_cast<std::uint16_t>(std::stoul(status.get<std::string>(), &used, 16));
        if (used != 4) bad("'status' must be 4 hex digits");
    } catch (const std::logic_error&) {
        bad("'status' must be 4 hex digits");
    }
    if (auto lanes = j.find("enabledLanes"); lanes != j.end()) {
        std::vector<std::uint8_t> v;
        for (const auto& lane : *lanes) v.push_back(as_uint<std::uint8_t>(lane, 255, "enabledLanes"));
        s.enabled_lanes = std::move(v);
    }
    for (const auto& mj : member(j, "states")) {
        MovementState m;
        m.movement_name = opt_string(mj, "movementName");
        m.signal_group = as_uint<std::uint8_t>(member(mj, "signalGroup"), 255, "signalGroup");
        for (const auto& ej : member(mj, "state-time-speed")) {
            MovementEvent ev;
            const auto& label = member(ej, "eventState");
            if (!label.is_string()) bad("'eventState' is not a string");
            auto state = movement_phase_state_from_label(label.get<std::string>());
            if (!state) bad("unknown eventState '" + label.get<std::string>() + "'");
            ev.event_state = *state;
            if (auto tj = ej.find("timing"); tj != ej.end()) {
                TimeChangeDetails t;
                t.start_time = opt_uint<std::uint16_t>(*tj, "startTime", kTimeMarkMax);
                t.min_end_time = as_uint<std::uint16_t>(member(*tj, "minEndTime"), kTimeMarkMax, "minEndTime");
                t.max_end_time = opt_uint<std::uint16_t>(*tj, "maxEndTime", kTimeMarkMax);
                t.likely_time = opt_uint<std::uint16_t>(*tj, "likelyTime", kTimeMarkMax);
                t.confidence = opt_uint<std::uint8_t>(*tj, "confidence", 15);
                t.next_time = opt_uint<std::uint16_t>(*tj, "nextTime", kTimeMarkMax);
                ev.timing = t;
            }
            m.events.push_back(std::move(ev));
        }
        s.movements.push_back(std::move(m));
    }
    return s;
}

}  // namespace

std::string to_decoded_text(const SpatMessage& message) {
    ordered_json value = ordered_json::object();
    if (message.moy) value["timeStamp"] = *message.moy;
    if (message.name) value["name"] = *message.name;
    ordered_json intersections = ordered_json::array();
    for (const auto& s : message.intersections) intersections.push_back(intersection_to_json(s));
    value["intersections"] = std::move(intersections);

    ordered_json doc = ordered_json::object();
    doc["messageId"] = message.message_id;
    doc["value"] = std::move(value);
    return doc.dump();
}

SpatMessage from_decoded_text(std::string_view text) {
    ordered_json doc = ordered_json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) bad("not a JSON object");
    SpatMessage m;
    m.message_id = as_uint<std::uint32_t>(member(doc, "messageId"), 32767, "messageId");
    if (m.message_id != 19) bad("messageId is not 19");
    const auto& value = member(doc, "value");
    m.moy = opt_uint<std::uint32_t>(value, "timeStamp", kMinuteOfYearMax);
    m.name = opt_string(value, "name");
    const auto& list = member(value, "intersections");
    if (!list.is_array() || list.empty()) bad("'intersections' must be a non-empty array");
    for (const auto& s : list) m.intersections.push_back(intersection_from_json(s));
    return m;
}

}  // namespace spatgen
