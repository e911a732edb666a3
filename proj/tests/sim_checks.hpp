#pragma once

#include "spatgen/sim.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace fixture {

struct RedViolation {
    int vehicle_id = 0;
    double onset = 0.0;
    double crossed_at = 0.0;
};

struct RedCheck {
    std::size_t eligible = 0;  // (vehicle, red interval) pairs that could stop
    std::vector<RedViolation> violations;
};

// For every red interval on every approach, every vehicle of that approach that
// was at least v^2 / (2 decel_max) short of its stop line at the onset (or that
// entered during the red) must not put its front past the line before the red ends.
inline RedCheck check_red_light(const spatgen::SimConfig& cfg, const spatgen::SimulationResult& run,
                                bool include_late_arrivals = false) {
    using namespace spatgen;
    const auto& g = cfg.geometry;
    const double line = g.approach_length - g.stop_line_offset;

    // Records grouped by tick.
    std::vector<std::vector<const TrajectoryRecord*>> by_tick(static_cast<std::size_t>(run.ticks));
    for (const auto& r : run.records) {
        const auto k = static_cast<std::size_t>(std::llround(r.time / cfg.tick));
        by_tick.at(k).push_back(&r);
    }

    RedCheck out;
    for (Approach a : {Approach::NorthSouth, Approach::EastWest}) {
        std::int64_t k = 0;
        while (k < run.ticks) {
            if (run.signals[static_cast<std::size_t>(k)].at(a).color != LightColor::Red) {
                ++k;
                continue;
            }
            const std::int64_t onset = k;
            while (k < run.ticks && run.signals[static_cast<std::size_t>(k)].at(a).color == LightColor::Red) ++k;
            const std::int64_t end = k;  // exclusive

            std::map<int, bool> watched;  // vehicle -> crossed during this red
            std::map<int, bool> present;
            for (const auto* r : by_tick[static_cast<std::size_t>(onset)]) {
                if (approach_of(r->route) != a) continue;
                present[r->vehicle_id] = true;
                const double to_line = line - g.along(r->route, {r->x, r->y});
                if (to_line >= r->speed * r->speed / (2.0 * cfg.decel_max) && to_line >= 0.0) {
                    watched[r->vehicle_id] = false;
                }
            }
            // Motion during the last red tick shows up in the next record.
            for (std::int64_t t = onset; t <= end && t < run.ticks; ++t) {
                for (const auto* r : by_tick[static_cast<std::size_t>(t)]) {
                    if (approach_of(r->route) != a) continue;
                    auto it = watched.find(r->vehicle_id);
                    if (it == watched.end()) {
                        if (!include_late_arrivals || present.count(r->vehicle_id)) continue;
                        const double to_line = line - g.along(r->route, {r->x, r->y});
                        if (to_line < r->speed * r->speed / (2.0 * cfg.decel_max)) continue;
                        it = watched.emplace(r->vehicle_id, false).first;
                    }
                    if (it->second) continue;
                    if (g.along(r->route, {r->x, r->y}) > line + 1e-9) {
                        it->second = true;
                        out.violations.push_back({r->vehicle_id, onset * cfg.tick, r->time});
                    }
                }
            }
            out.eligible += watched.size();
        }
    }
    return out;
}

}  // namespace fixture
