#include "spatgen/codec.hpp"

#include <array>
#include <set>

namespace spatgen {

namespace {

constexpr std::array<std::string_view, kMovementPhaseStateCount> kStateLabels = {
    "unavailable",
    "dark",
    "stop-Then-Proceed",
    "stop-And-Remain",
    "pre-Movement",
    "permissive-Movement-Allowed",
    "protected-Movement-Allowed",
    "permissive-clearance",
    "protected-clearance",
    "caution-Conflicting-Traffic",
};

[[noreturn]] void unsupported(std::size_t at, const char* what) {
    throw CodecError(CodecErrc::UnsupportedExtension, at, what);
}

void read_extension_bit(BitReader& r, const char* production) {
    const std::size_t at = r.cursor();
    if (r.read_bit()) unsupported(at, production);
}

// Presence bit for an optional component the subset does not model.
void read_absent(BitReader& r, const char* component) {
    const std::size_t at = r.cursor();
    if (r.read_bit()) unsupported(at, component);
}

std::uint16_t read_u16(BitReader& r, std::int64_t lo, std::int64_t hi) {
    return static_cast<std::uint16_t>(read_constrained_int(r, lo, hi));
}

// DescriptiveName ::= IA5String (SIZE(1..63))
std::string read_name(BitReader& r) {
    const auto length = read_constrained_int(r, 1, 63);
    std::string name;
    name.reserve(static_cast<std::size_t>(length));
    for (std::int64_t i = 0; i < length; ++i) name.push_back(static_cast<char>(r.read_bits(7)));
    return name;
}

void write_name(BitWriter& w, const std::string& name) {
    write_constrained_int(w, static_cast<std::int64_t>(name.size()), 1, 63);
    for (unsigned char c : name) {
        if (c > 127) {
            throw CodecError(CodecErrc::ConstraintViolation, w.bit_length(),
                             "DescriptiveName character outside IA5");
        }
        w.write_bits(c, 7);
    }
}

template <typename T>
std::optional<T> read_if(bool present, BitReader& r, std::int64_t lo, std::int64_t hi) {
    if (!present) return std::nullopt;
    return static_cast<T>(read_constrained_int(r, lo, hi));
}

TimeChangeDetails read_timing(BitReader& r) {
    // Non-extensible SEQUENCE with five optional components.
    const bool has_start = r.read_bit();
    const bool has_max = r.read_bit();
    const bool has_likely = r.read_bit();
    const bool has_confidence = r.read_bit();
    const bool has_next = r.read_bit();
    TimeChangeDetails t;
    t.start_time = read_if<std::uint16_t>(has_start, r, 0, kTimeMarkMax);
    t.min_end_time = read_u16(r, 0, kTimeMarkMax);
    t.max_end_time = read_if<std::uint16_t>(has_max, r, 0, kTimeMarkMax);
    t.likely_time = read_if<std::uint16_t>(has_likely, r, 0, kTimeMarkMax);
    t.confidence = read_if<std::uint8_t>(has_confidence, r, 0, 15);
    t.next_time = read_if<std::uint16_t>(has_next, r, 0, kTimeMarkMax);
    return t;
}

MovementEvent read_event(BitReader& r) {
    read_extension_bit(r, "MovementEvent extension");
    const bool has_timing = r.read_bit();
    read_absent(r, "MovementEvent.speeds");
    read_absent(r, "MovementEvent.regional");
    MovementEvent ev;
    ev.event_state =
        static_cast<MovementPhaseState>(read_constrained_int(r, 0, kMovementPhaseStateCount - 1));
    if (has_timing) ev.timing = read_timing(r);
    return ev;
}

MovementState read_movement(BitReader& r) {
    read_extension_bit(r, "MovementState extension");
    const bool has_name = r.read_bit();
    read_absent(r, "MovementState.maneuverAssistList");
    read_absent(r, "MovementState.regional");
    MovementState m;
    if (has_name) m.movement_name = read_name(r);
    m.signal_group = static_cast<std::uint8_t>(read_constrained_int(r, 0, 255));
    const auto count = read_constrained_int(r, 1, 16);
    m.events.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) m.events.push_back(read_event(r));
    return m;
}

IntersectionState read_intersection(BitReader& r) {
    read_extension_bit(r, "IntersectionState extension");
    const bool has_name = r.read_bit();
    const bool has_moy = r.read_bit();
    const bool has_dsecond = r.read_bit();
    const bool has_lanes = r.read_bit();
    read_absent(r, "IntersectionState.maneuverAssistList");
    read_absent(r, "IntersectionState.regional");

    IntersectionState s;
    if (has_name) s.name = read_name(r);
    // IntersectionReferenceID: non-extensible, optional region.
    const bool has_region = r.read_bit();
    s.region = read_if<std::uint16_t>(has_region, r, 0, 65535);
    s.id = read_u16(r, 0, 65535);
    s.revision = static_cast<std::uint8_t>(read_constrained_int(r, 0, 127));
    s.status = static_cast<std::uint16_t>(r.read_bits(16));
    s.moy = read_if<std::uint32_t>(has_moy, r, 0, kMinuteOfYearMax);
    s.dsecond = read_if<std::uint16_t>(has_dsecond, r, 0, 65535);
    if (has_lanes) {
        const auto count = read_constrained_int(r, 1, 16);
        std::vector<std::uint8_t> lanes;
        for (std::int64_t i = 0; i < count; ++i) {
            lanes.push_back(static_cast<std::uint8_t>(read_constrained_int(r, 0, 255)));
        }
        s.enabled_lanes = std::move(lanes);
    }

    const std::size_t list_at = r.cursor();
    const auto count = read_constrained_int(r, 1, 255);
    s.movements.reserve(static_cast<std::size_t>(count));
    std::set<std::uint8_t> groups;
    for (std::int64_t i = 0; i < count; ++i) {
        s.movements.push_back(read_movement(r));
        if (!groups.insert(s.movements.back().signal_group).second) {
            throw CodecError(CodecErrc::ConstraintViolation, list_at,
                             "duplicate signalGroup " +
                                 std::to_string(s.movements.back().signal_group));
        }
    }
    return s;
}

SpatMessage read_spat(BitReader& r) {
    read_extension_bit(r, "SPAT extension");
    const bool has_moy = r.read_bit();
    const bool has_name = r.read_bit();
    read_absent(r, "SPAT.regional");
    SpatMessage m;
    m.moy = read_if<std::uint32_t>(has_moy, r, 0, kMinuteOfYearMax);
    if (has_name) m.name = read_name(r);
    const auto count = read_constrained_int(r, 1, 32);
    m.intersections.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) m.intersections.push_back(read_intersection(r));
    return m;
}

template <typename T>
void check_size(const BitWriter& w, const std::vector<T>& items, std::size_t lo, std::size_t hi,
                const char* what) {
    if (items.size() < lo || items.size() > hi) {
        throw CodecError(CodecErrc::ConstraintViolation, w.bit_length(),
                         std::string(what) + " size " + std::to_string(items.size()) +
                             " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

template <typename T>
void write_if(BitWriter& w, const std::optional<T>& value, std::int64_t lo, std::int64_t hi) {
    if (value) write_constrained_int(w, static_cast<std::int64_t>(*value), lo, hi);
}

void write_timing(BitWriter& w, const TimeChangeDetails& t) {
    w.write_bit(t.start_time.has_value());
    w.write_bit(t.max_end_time.has_value());
    w.write_bit(t.likely_time.has_value());
    w.write_bit(t.confidence.has_value());
    w.write_bit(t.next_time.has_value());
    write_if(w, t.start_time, 0, kTimeMarkMax);
    write_constrained_int(w, t.min_end_time, 0, kTimeMarkMax);
    write_if(w, t.max_end_time, 0, kTimeMarkMax);
    write_if(w, t.likely_time, 0, kTimeMarkMax);
    write_if(w, t.confidence, 0, 15);
    write_if(w, t.next_time, 0, kTimeMarkMax);
}

void write_event(BitWriter& w, const MovementEvent& ev) {
    w.write_bit(false);  // extension
    w.write_bit(ev.timing.has_value());
    w.write_bit(false);  // speeds
    w.write_bit(false);  // regional
    write_constrained_int(w, static_cast<std::int64_t>(ev.event_state), 0,
                          kMovementPhaseStateCount - 1);
    if (ev.timing) write_timing(w, *ev.timing);
}

void write_movement(BitWriter& w, const MovementState& m) {
    w.write_bit(false);
    w.write_bit(m.movement_name.has_value());
    w.write_bit(false);  // maneuverAssistList
    w.write_bit(false);  // regional
    if (m.movement_name) write_name(w, *m.movement_name);
    write_constrained_int(w, m.signal_group, 0, 255);
    check_size(w, m.events, 1, 16, "state-time-speed");
    write_constrained_int(w, static_cast<std::int64_t>(m.events.size()), 1, 16);
    for (const auto& ev : m.events) write_event(w, ev);
}

void write_intersection(BitWriter& w, const IntersectionState& s) {
    w.write_bit(false);
    w.write_bit(s.name.has_value());
    w.write_bit(s.moy.has_value());
    w.write_bit(s.dsecond.has_value());
    w.write_bit(s.enabled_lanes.has_value());
    w.write_bit(false);  // maneuverAssistList
    w.write_bit(false);  // regional
    if (s.name) write_name(w, *s.name);
    w.write_bit(s.region.has_value());
    write_if(w, s.region, 0, 65535);
    write_constrained_int(w, s.id, 0, 65535);
    write_constrained_int(w, s.revision, 0, 127);
    w.write_bits(s.status, 16);
    write_if(w, s.moy, 0, kMinuteOfYearMax);
    write_if(w, s.dsecond, 0, 65535);
    if (s.enabled_lanes) {
        check_size(w, *s.enabled_lanes, 1, 16, "enabledLanes");
        write_constrained_int(w, static_cast<std::int64_t>(s.enabled_lanes->size()), 1, 16);
        for (auto lane : *s.enabled_lanes) write_constrained_int(w, lane, 0, 255);
    }
    check_size(w, s.movements, 1, 255, "states");
    std::set<std::uint8_t> groups;
    for (const auto& m : s.movements) {
        if (!groups.insert(m.signal_group).second) {
            throw CodecError(CodecErrc::ConstraintViolation, w.bit_length(),
                             "duplicate signalGroup " + std::to_string(m.signal_group));
        }
    }
    write_constrained_int(w, static_cast<std::int64_t>(s.movements.size()), 1, 255);
    for (const auto& m : s.movements) write_movement(w, m);
}

}  // namespace

std::string_view to_label(MovementPhaseState state) {
    return kStateLabels.at(static_cast<std::size_t>(state));
}

std::optional<MovementPhaseState> movement_phase_state_from_label(std::string_view label) {
    for (std::size_t i = 0; i < kStateLabels.size(); ++i) {
        if (kStateLabels[i] == label) return static_cast<MovementPhaseState>(i);
    }
    return std::nullopt;
}

SpatMessage decode_spat(std::span<const std::uint8_t> payload) {
    BitReader r(payload);
    // MessageFrame ::= SEQUENCE { messageId, value, ... }. The identifier is
    // checked before the extension bit so routing and decoding agree on what
    // counts as a SPaT frame.
    const bool extended = r.read_bit();
    const auto id = static_cast<std::uint32_t>(read_constrained_int(r, 0, 32767));
    if (id != 19) {
        throw CodecError(CodecErrc::WrongMessageId, 1, "messageId " + std::to_string(id));
    }
    if (extended) unsupported(0, "MessageFrame extension");

    const auto segments = read_open_type(r);
    const std::size_t after = r.cursor();
    if (segments.size() == 1) {
        const std::size_t outer = r.cursor() + r.bits_left();
        r.restore_limit(outer, segments[0].bit_start);
        r.narrow(segments[0].octets * 8);
        SpatMessage m = read_spat(r);
        m.message_id = id;
        r.restore_limit(outer, after);
        return m;
    }

    // Fragmented: stitch the pieces together, then report offsets in the original stream.
    std::vector<std::uint8_t> body;
    std::vector<std::size_t> starts;  // body bit offset where each segment begins
    for (const auto& seg : segments) {
        starts.push_back(body.size() * 8);
        BitReader copy(payload);
        copy.skip_bits(seg.bit_start);
        for (std::size_t i = 0; i < seg.octets; ++i) body.push_back(static_cast<std::uint8_t>(copy.read_bits(8)));
    }
    BitReader inner(body);
    try {
        SpatMessage m = read_spat(inner);
        m.message_id = id;
        return m;
    } catch (const CodecError& e) {
        std::size_t k = 0;
        while (k + 1 < starts.size() && starts[k + 1] <= e.bit_offset()) ++k;
        const std::size_t mapped =
            k < segments.size() ? segments[k].bit_start + (e.bit_offset() - starts[k]) : payload.size() * 8;
        throw CodecError(e.kind(), std::min(mapped, payload.size() * 8), e.what());
    }
}

std::vector<std::uint8_t> encode_spat(const SpatMessage& message) {
    if (message.message_id != 19) {
        throw CodecError(CodecErrc::ConstraintViolation, 0, "message_id must be 19");
    }
    BitWriter body;
    body.write_bit(false);  // extension
    body.write_bit(message.moy.has_value());
    body.write_bit(message.name.has_value());
    body.write_bit(false);  // regional
    write_if(body, message.moy, 0, kMinuteOfYearMax);
    if (message.name) write_name(body, *message.name);
    check_size(body, message.intersections, 1, 32, "intersections");
    write_constrained_int(body, static_cast<std::int64_t>(message.intersections.size()), 1, 32);
    for (const auto& s : message.intersections) write_intersection(body, s);
    body.pad_to_octet();

    BitWriter frame;
    frame.write_bit(false);
    write_constrained_int(frame, message.message_id, 0, 32767);
    write_open_type(frame, body.bytes());
    frame.pad_to_octet();
    return frame.bytes();
}

}  // namespace spatgen
