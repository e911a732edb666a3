#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spatgen/phase_builder.hpp"
#include "support.hpp"

using namespace spatgen;

namespace {

const ApproachMapping kMap = ApproachMapping::standard();

PhaseTable first_cycle() {
    PhaseTable t = reference_phase_table();
    t.phases.resize(4);
    t.cycle_boundaries.clear();
    return t;
}

SignalSnapshot still(std::int64_t t_ms, LightColor ns, LightColor ew) {
    const auto state = [](LightColor c) {
        switch (c) {
            case LightColor::Green: return MovementPhaseState::ProtectedMovementAllowed;
            case LightColor::Yellow: return MovementPhaseState::ProtectedClearance;
            case LightColor::Red: return MovementPhaseState::StopAndRemain;
            default: return MovementPhaseState::Dark;
        }
    };
    SignalSnapshot s;
    s.moy = static_cast<std::uint32_t>(t_ms / 60000);
    s.dsecond = static_cast<std::uint16_t>(t_ms % 60000);
    for (int g : {1, 2, 5, 6}) s.groups[static_cast<std::uint8_t>(g)].state = state(ns);
    for (int g : {3, 4, 7, 8}) s.groups[static_cast<std::uint8_t>(g)].state = state(ew);
    return s;
}

}  // namespace

TEST_CASE("reference schedule") {
    const PhaseTable t = reference_phase_table();
    const double expect[] = {28, 3, 20, 3, 35, 3, 20, 3, 35, 3, 20, 3};
    REQUIRE(t.phases.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(t.phases[i].duration == expect[i]);
    CHECK(t.phases[0].ns_color == LightColor::Green);
    CHECK(t.phases[0].ew_color == LightColor::Red);
    CHECK(t.phases[3].ew_color == LightColor::Yellow);
    CHECK(t.cycle_boundaries == std::vector<std::size_t>{4, 8});
    CHECK(t.total_duration() == 176.0);
    CHECK_NOTHROW(validate(t));
}

TEST_CASE("approach colors of the captured snapshot") {
    const SignalSnapshot snap = snapshot(decode_spat(hex_decode(fixture::kGoldenHex)));
    CHECK(approach_color(snap, kMap, Approach::NorthSouth) == LightColor::Green);
    CHECK(approach_color(snap, kMap, Approach::EastWest) == LightColor::Red);

    SignalSnapshot split = snap;
    split.groups[1].state = MovementPhaseState::StopAndRemain;
    CHECK(approach_color(split, kMap, Approach::NorthSouth) == LightColor::Red);
    split.groups[9].state = MovementPhaseState::Dark;
    CHECK_THROWS_AS(approach_color(split, kMap, Approach::NorthSouth), PhaseError);
}

TEST_CASE("first cycle sampled at 1 s") {
    const auto stream = synthesize_stream(first_cycle(), 1.0, kMap);
    CHECK(stream.size() == 54);
    CHECK(build_phase_table(stream, kMap) == first_cycle());
}

TEST_CASE("first cycle sampled at 0.5 s") {
    const auto stream = synthesize_stream(first_cycle(), 0.5, kMap);
    CHECK(stream.size() == 108);
    CHECK(build_phase_table(stream, kMap) == first_cycle());
}

TEST_CASE("full schedule round trip") {
    for (double p : {0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
        CAPTURE(p);
        const PhaseTable rebuilt = build_phase_table(synthesize_stream(reference_phase_table(), p, kMap), kMap);
        CHECK(rebuilt == reference_phase_table());
        const double expect[] = {28, 3, 20, 3, 35, 3, 20, 3, 35, 3, 20, 3};
        for (std::size_t i = 0; i < rebuilt.phases.size(); ++i) CHECK(rebuilt.phases[i].duration == expect[i]);
    }
}

TEST_CASE("two identical snapshots") {
    std::vector<SignalSnapshot> s{still(1000, LightColor::Green, LightColor::Red),
                                  still(2000, LightColor::Green, LightColor::Red)};
    const PhaseTable t = build_phase_table(s, kMap);
    REQUIRE(t.phases.size() == 1);
    CHECK(t.phases[0].duration == 1.0);
    CHECK(t.cycle_boundaries.empty());
}

TEST_CASE("single phase synthesis") {
    PhaseTable t;
    t.phases.push_back({4.0, LightColor::Red, LightColor::Green});
    const auto s = synthesize_stream(t, 4.0, kMap);
    REQUIRE(s.size() == 1);
    CHECK(approach_color(s[0], kMap, Approach::NorthSouth) == LightColor::Red);
    CHECK(approach_color(s[0], kMap, Approach::EastWest) == LightColor::Green);
}

TEST_CASE("stream errors") {
    const auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const PhaseError& e) {
            return e.kind();
        }
        FAIL("no error");
        return PhaseErrc::InvalidTable;
    };
    const auto a = still(0, LightColor::Green, LightColor::Red);
    const auto b = still(1000, LightColor::Green, LightColor::Red);
    const auto far = still(5000, LightColor::Green, LightColor::Red);
    CHECK(kind_of([&] { build_phase_table({a}, kMap); }) == PhaseErrc::EmptyStream);
    CHECK(kind_of([&] { build_phase_table({b, a}, kMap); }) == PhaseErrc::NonMonotonicTime);
    CHECK(kind_of([&] { build_phase_table({a, a}, kMap); }) == PhaseErrc::NonMonotonicTime);
    CHECK(kind_of([&] { build_phase_table({a, far}, kMap); }) == PhaseErrc::GapTooLarge);
    CHECK(kind_of([&] { synthesize_stream(first_cycle(), 3.5, kMap); }) == PhaseErrc::SamplePeriodTooCoarse);
    CHECK(kind_of([&] { synthesize_stream(first_cycle(), 0.0, kMap); }) == PhaseErrc::SamplePeriodTooCoarse);

    PhaseTable both_green;
    both_green.phases.push_back({3.0, LightColor::Green, LightColor::Green});
    CHECK(kind_of([&] { validate(both_green); }) == PhaseErrc::InvalidTable);
    PhaseTable repeat;
    repeat.phases = {{3.0, LightColor::Green, LightColor::Red}, {3.0, LightColor::Green, LightColor::Red}};
    CHECK(kind_of([&] { validate(repeat); }) == PhaseErrc::InvalidTable);
}

TEST_CASE("jittered boundaries keep fractional durations") {
    // 10 s green then 4.6 s gets rounded only inside 0.25 s of an integer.
    PhaseTable t;
    t.phases = {{10.0, LightColor::Green, LightColor::Red},
                {4.6, LightColor::Yellow, LightColor::Red},
                {6.0, LightColor::Red, LightColor::Green}};
    const PhaseTable rebuilt = build_phase_table(synthesize_stream(t, 0.2, kMap), kMap);
    REQUIRE(rebuilt.phases.size() == 3);
    CHECK(rebuilt.phases[1].duration == doctest::Approx(4.6));
}

TEST_CASE("random tables round trip at 0.5 s") {
    fixture::Gen gen(1234);
    for (int i = 0; i < 1000; ++i) {
        const PhaseTable t = gen.phase_table();
        const PhaseTable back = build_phase_table(synthesize_stream(t, 0.5, kMap), kMap);
        REQUIRE(back == t);
        // One-green rule survives.
        for (const auto& p : back.phases) {
            CHECK_FALSE((p.ns_color == LightColor::Green && p.ew_color == LightColor::Green));
        }
    }
}

TEST_CASE("cycle duration is stable across sampling") {
    const double total = reference_phase_table().total_duration();
    for (double p : {0.3, 0.7, 1.3, 2.0}) {
        const PhaseTable t = build_phase_table(synthesize_stream(reference_phase_table(), p, kMap), kMap);
        CHECK(std::abs(t.total_duration() - total) <= p + 1e-9);
    }
}

TEST_CASE("table files") {
    const PhaseTable t = reference_phase_table();
    const std::string csv = to_phase_csv(t);
    CHECK(csv.rfind("phase,duration,north_south,east_west\n1,28,Green,Red\n2,3,Yellow,Red\n", 0) == 0);
    CHECK(csv.find("\n1,35,Green,Red\n") != std::string::npos);
    CHECK(parse_phase_table(csv) == t);
    CHECK(parse_phase_table(to_phase_json(t)) == t);
    CHECK_THROWS_AS(parse_phase_table("phase,duration\n1,x\n"), PhaseError);
}
