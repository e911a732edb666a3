#pragma once

#include "spatgen/codec.hpp"
#include "spatgen/envelope.hpp"
#include "spatgen/phase_builder.hpp"
#include "spatgen/spat_state.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace fixture {

// Captured RSU frame and its envelope line.
inline const std::string kGoldenHex =
    "00133a44414b00863057f00008ab40700804302f498038218178940081180"
    "bbe600208a05df300304302f12802021817a4c0141140bbe600c08c05df30";

inline std::string envelope_line(const std::string& hex, int seqno = 1) {
    return R"({"msg-wave":[{"dot3":{"chan":"SCH1","dest":"ffffffffffff","ll":3,"priority":3,"psid":"8002",)"
           R"("security":{"cert":true,"crypt":false,"prof":false,"sign":false},"slot":"CONTINUOUS","xtension":0},)"
           R"("encoding":"UPER","payload":")" +
           hex + R"("}],"seqno":)" + std::to_string(seqno) + R"(,"pkgno":0})";
}

inline const std::string kGoldenLine = envelope_line(kGoldenHex);

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---- random generators -------------------------------------------------------

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& engine() { return rng_; }

    std::string ia5(int max_len = 63) {
        std::string s(static_cast<std::size_t>(uniform(1, max_len)), ' ');
        for (auto& c : s) c = static_cast<char>(uniform(0, 127));
        return s;
    }

    spatgen::TimeChangeDetails timing() {
        spatgen::TimeChangeDetails t;
        t.min_end_time = static_cast<std::uint16_t>(uniform(0, spatgen::kTimeMarkMax));
        const auto mark = [&]() { return static_cast<std::uint16_t>(uniform(0, spatgen::kTimeMarkMax)); };
        if (coin()) t.start_time = mark();
        if (coin()) t.max_end_time = mark();
        if (coin()) t.likely_time = mark();
        if (coin()) t.confidence = static_cast<std::uint8_t>(uniform(0, 15));
        if (coin()) t.next_time = mark();
        return t;
    }

    spatgen::SpatMessage message() {
        using namespace spatgen;
        SpatMessage m;
        if (coin()) m.moy = static_cast<std::uint32_t>(uniform(0, kMinuteOfYearMax));
        if (coin(0.2)) m.name = ia5();
        const auto n_int = uniform(1, coin(0.9) ? 2 : 32);
        for (std::int64_t i = 0; i < n_int; ++i) {
            IntersectionState s;
            if (coin(0.2)) s.name = ia5();
            if (coin(0.3)) s.region = static_cast<std::uint16_t>(uniform(0, 65535));
            s.id = static_cast<std::uint16_t>(uniform(0, 65535));
            s.revision = static_cast<std::uint8_t>(uniform(0, 127));
            s.status = static_cast<std::uint16_t>(uniform(0, 65535));
            if (coin()) s.moy = static_cast<std::uint32_t>(uniform(0, kMinuteOfYearMax));
            if (coin(0.8)) s.dsecond = static_cast<std::uint16_t>(uniform(0, 65535));
            if (coin(0.2)) {
                std::vector<std::uint8_t> lanes(static_cast<std::size_t>(uniform(1, 16)));
                for (auto& l : lanes) l = static_cast<std::uint8_t>(uniform(0, 255));
                s.enabled_lanes = std::move(lanes);
            }
            // Distinct signal groups, random stream order.
            std::vector<int> ids(256);
            for (int g = 0; g < 256; ++g) ids[static_cast<std::size_t>(g)] = g;
            std::shuffle(ids.begin(), ids.end(), rng_);
            const auto n_mov = uniform(1, coin(0.9) ? 12 : 255);
            for (std::int64_t k = 0; k < n_mov; ++k) {
                MovementState mv;
                if (coin(0.1)) mv.movement_name = ia5(20);
                mv.signal_group = static_cast<std::uint8_t>(ids[static_cast<std::size_t>(k)]);
                const auto n_ev = uniform(1, coin(0.8) ? 2 : 16);
                for (std::int64_t e = 0; e < n_ev; ++e) {
                    MovementEvent ev;
                    ev.event_state = static_cast<MovementPhaseState>(uniform(0, kMovementPhaseStateCount - 1));
                    if (coin(0.85)) ev.timing = timing();
                    mv.events.push_back(ev);
                }
                s.movements.push_back(std::move(mv));
            }
            m.intersections.push_back(std::move(s));
        }
        return m;
    }

    // Whole-second phases, neighbours differ, never green on both approaches.
    spatgen::PhaseTable phase_table() {
        using spatgen::LightColor;
        static constexpr LightColor palette[] = {LightColor::Green, LightColor::Yellow, LightColor::Red,
                                                 LightColor::Unknown};
        spatgen::PhaseTable t;
        const auto n = uniform(2, 30);
        while (static_cast<std::int64_t>(t.phases.size()) < n) {
            spatgen::Phase p;
            p.duration = static_cast<double>(uniform(1, 60));
            p.ns_color = palette[uniform(0, coin(0.9) ? 2 : 3)];
            p.ew_color = palette[uniform(0, coin(0.9) ? 2 : 3)];
            if (p.ns_color == LightColor::Green && p.ew_color == LightColor::Green) continue;
            if (!t.phases.empty() && t.phases.back().ns_color == p.ns_color &&
                t.phases.back().ew_color == p.ew_color) {
                continue;
            }
            t.phases.push_back(p);
        }
        t.cycle_boundaries = spatgen::find_cycle_boundaries(t.phases);
        return t;
    }

private:
    std::mt19937_64 rng_;
};

// Rebuilds the SPaT message a controller would have broadcast for a snapshot.
inline spatgen::SpatMessage message_from_snapshot(const spatgen::SignalSnapshot& snap) {
    using namespace spatgen;
    SpatMessage m;
    m.moy = snap.moy;
    IntersectionState s;
    s.id = snap.intersection_id;
    s.revision = 1;
    s.dsecond = snap.dsecond;
    const std::int64_t now_ms = std::int64_t{snap.moy % 60} * 60000 + snap.dsecond;
    for (const auto& [group, g] : snap.groups) {
        MovementState mv;
        mv.signal_group = group;
        MovementEvent ev;
        ev.event_state = g.state;
        if (g.remaining) {
            const auto end_ms = now_ms + std::llround(*g.remaining * 1000.0);
            TimeChangeDetails t;
            t.min_end_time = static_cast<std::uint16_t>((end_ms / 100) % 36000);
            ev.timing = t;
        }
        mv.events.push_back(ev);
        s.movements.push_back(std::move(mv));
    }
    m.intersections.push_back(std::move(s));
    return m;
}

}  // namespace fixture
