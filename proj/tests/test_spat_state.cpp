#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spatgen/spat_state.hpp"
#include "support.hpp"

#include <json.hpp>

using namespace spatgen;

namespace {

SpatMessage golden_message() { return decode_spat(hex_decode(fixture::kGoldenHex)); }

// Hand form of the remaining-time rule in seconds, straight from its definition.
double oracle_remaining(std::uint16_t mark, std::uint32_t moy, std::uint16_t ds) {
    const double now = (moy % 60) * 60.0 + ds / 1000.0;
    double d = mark / 10.0 - now;
    while (d < 0) d += 3600.0;
    while (d >= 3600.0) d -= 3600.0;
    return d;
}

}  // namespace

TEST_CASE("remaining seconds examples") {
    CHECK(std::abs(remaining_seconds(24051, 278859, 35508) - 29.592) <= 1e-9);
    CHECK(std::abs(remaining_seconds(24101, 278859, 35508) - 34.592) <= 1e-9);
    CHECK(std::abs(remaining_seconds(24211, 278859, 35508) - 45.592) <= 1e-9);
    CHECK(remaining_seconds(0, 0, 0) == 0.0);
    CHECK(remaining_seconds(10, 59, 59000) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(remaining_seconds(36000, 0, 0) == 0.0);
    CHECK_THROWS_AS(remaining_seconds(36001, 0, 0), SpatStateError);
    CHECK_THROWS_AS(remaining_seconds(36011, 0, 0), SpatStateError);
}

TEST_CASE("remaining seconds stays inside one hour") {
    fixture::Gen gen(3);
    for (int i = 0; i < 100000; ++i) {
        const auto mark = static_cast<std::uint16_t>(gen.uniform(0, 36000));
        const auto moy = static_cast<std::uint32_t>(gen.uniform(0, kMinuteOfYearMax));
        const auto ds = static_cast<std::uint16_t>(gen.uniform(0, 65535));
        const double r = remaining_seconds(mark, moy, ds);
        REQUIRE(r >= 0.0);
        REQUIRE(r < 3600.0);
        CHECK(std::abs(r - oracle_remaining(mark, moy, ds)) < 1e-6);
    }
}

TEST_CASE("remaining seconds slope is a tenth per mark") {
    fixture::Gen gen(4);
    for (int i = 0; i < 10000; ++i) {
        const auto mark = static_cast<std::uint16_t>(gen.uniform(0, 35999));
        const auto moy = static_cast<std::uint32_t>(gen.uniform(0, kMinuteOfYearMax));
        const auto ds = static_cast<std::uint16_t>(gen.uniform(0, 59999));
        const double a = remaining_seconds(mark, moy, ds);
        const double b = remaining_seconds(static_cast<std::uint16_t>(mark + 1), moy, ds);
        const double step = b - a;
        // Either the straight slope or the single wrap back to the start of the hour.
        CHECK((std::abs(step - 0.1) < 1e-9 || std::abs(step - (0.1 - 3600.0)) < 1e-6));
    }
}

TEST_CASE("color partition") {
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < kMovementPhaseStateCount; ++i) {
        ++counts[static_cast<int>(color_of(static_cast<MovementPhaseState>(i)))];
    }
    CHECK(counts[static_cast<int>(LightColor::Green)] == 2);
    CHECK(counts[static_cast<int>(LightColor::Yellow)] == 3);
    CHECK(counts[static_cast<int>(LightColor::Red)] == 3);
    CHECK(counts[static_cast<int>(LightColor::Unknown)] == 2);
    CHECK(color_of(MovementPhaseState::StopAndRemain) == LightColor::Red);
    CHECK(color_of(MovementPhaseState::StopThenProceed) == LightColor::Red);
    CHECK(color_of(MovementPhaseState::PreMovement) == LightColor::Red);
    CHECK(color_of(MovementPhaseState::ProtectedMovementAllowed) == LightColor::Green);
    CHECK(color_of(MovementPhaseState::PermissiveMovementAllowed) == LightColor::Green);
    CHECK(color_of(MovementPhaseState::ProtectedClearance) == LightColor::Yellow);
    CHECK(color_of(MovementPhaseState::PermissiveClearance) == LightColor::Yellow);
    CHECK(color_of(MovementPhaseState::CautionConflictingTraffic) == LightColor::Yellow);
    CHECK(color_of(MovementPhaseState::Dark) == LightColor::Unknown);
    CHECK(color_of(MovementPhaseState::Unavailable) == LightColor::Unknown);
}

TEST_CASE("captured message snapshot") {
    SnapshotOptions opts;
    opts.labels[50698] = "Dayton";
    const SignalSnapshot snap = snapshot(golden_message(), opts);
    CHECK(snap.intersection_label == "Dayton");
    CHECK(snap.minute_of_hour == 39);
    CHECK(std::abs(snap.second_of_minute - 35.508) < 1e-12);
    REQUIRE(snap.groups.size() == 8);

    struct Row { std::uint8_t group; const char* label; double remaining; };
    const Row rows[] = {
        {1, "permissive-Movement-Allowed", 29.592}, {2, "protected-Movement-Allowed", 29.592},
        {3, "stop-And-Remain", 34.592},             {4, "stop-And-Remain", 45.592},
        {5, "permissive-Movement-Allowed", 29.592}, {6, "protected-Movement-Allowed", 29.592},
        {7, "stop-And-Remain", 34.592},             {8, "stop-And-Remain", 45.592},
    };
    for (const auto& row : rows) {
        CAPTURE(int{row.group});
        const GroupState& g = snap.groups.at(row.group);
        CHECK(to_label(g.state) == row.label);
        REQUIRE(g.remaining.has_value());
        CHECK(std::abs(*g.remaining - row.remaining) <= 1e-9);
    }
    CHECK(display_time(snap, 0).substr(2) == ":39:36 PM");
}

TEST_CASE("snapshot text keeps group order and three decimals") {
    SnapshotOptions opts;
    opts.labels[50698] = "Dayton";
    const SignalSnapshot snap = snapshot(golden_message(), opts);
    const std::string text = to_snapshot_text(snap);
    const auto doc = nlohmann::ordered_json::parse(text);
    CHECK(doc["intersection"] == "Dayton");
    CHECK(doc["minute"] == 39);
    int expect = 1;
    for (const auto& [key, value] : doc["groups"].items()) {
        CHECK(key == "Signal Group " + std::to_string(expect++));
    }
    CHECK(doc["groups"]["Signal Group 1"][0] == "permissive-Movement-Allowed");
    CHECK(doc["groups"]["Signal Group 1"][1].get<double>() == 29.592);
    CHECK(text.find("29.592") != std::string::npos);
    CHECK(from_snapshot_text(text).groups.size() == 8);
    const SignalSnapshot back = from_snapshot_text(text);
    CHECK(back.intersection_id == snap.intersection_id);
    CHECK(back.moy == snap.moy);
    CHECK(back.dsecond == snap.dsecond);
}

TEST_CASE("remaining zero at the current instant") {
    SpatMessage m;
    m.moy = 100;
    IntersectionState s;
    s.id = 9;
    s.dsecond = 12300;  // 40 min, 12.3 s -> mark (40*60+12.3)*10
    MovementState mv;
    mv.signal_group = 4;
    TimeChangeDetails t;
    t.min_end_time = static_cast<std::uint16_t>(40 * 600 + 123);
    mv.events.push_back({MovementPhaseState::StopAndRemain, t});
    s.movements.push_back(mv);
    m.intersections.push_back(s);
    const SignalSnapshot snap = snapshot(m);
    CHECK(snap.groups.at(4).remaining == 0.0);
}

TEST_CASE("missing timestamp and special marks") {
    SpatMessage m = golden_message();
    m.moy.reset();
    CHECK_THROWS_AS(snapshot(m), SpatStateError);
    m = golden_message();
    m.intersections[0].dsecond.reset();
    CHECK_THROWS_AS(snapshot(m), SpatStateError);

    m = golden_message();
    m.intersections[0].movements[0].events[0].timing->min_end_time = 36001;
    const SignalSnapshot snap = snapshot(m);
    CHECK_FALSE(snap.groups.at(8).remaining.has_value());
    CHECK(snap.groups.at(7).remaining.has_value());

    m = golden_message();
    CHECK_THROWS_AS(snapshot(m, 3), SpatStateError);
}

TEST_CASE("snapshot keeps every signal group") {
    fixture::Gen gen(11);
    for (int i = 0; i < 500; ++i) {
        SpatMessage m = gen.message();
        if (!m.moy) m.moy = 1;
        for (auto& s : m.intersections) {
            s.dsecond = static_cast<std::uint16_t>(gen.uniform(0, 59999));
            for (auto& mv : s.movements) {
                for (auto& ev : mv.events) {
                    if (ev.timing && is_special_time_mark(ev.timing->min_end_time)) ev.timing->min_end_time = 0;
                }
            }
        }
        for (std::size_t k = 0; k < m.intersections.size(); ++k) {
            const SignalSnapshot snap = snapshot(m, k);
            REQUIRE(snap.groups.size() == m.intersections[k].movements.size());
            for (const auto& mv : m.intersections[k].movements) {
                REQUIRE(snap.groups.count(mv.signal_group) == 1);
                const GroupState& g = snap.groups.at(mv.signal_group);
                CHECK(g.state == mv.events[0].event_state);
                CHECK(g.next_states.size() == mv.events.size() - 1);
                if (g.remaining) {
                    CHECK(*g.remaining >= 0.0);
                    CHECK(*g.remaining < 3600.0);
                }
            }
        }
    }
}
