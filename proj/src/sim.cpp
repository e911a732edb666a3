#include "spatgen/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace spatgen {

void validate(const SimConfig& c) {
    const auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigInvalid(std::string("invalid simulation config: ") + what);
    };
    require(c.vehicle_count >= 0, "vehicle_count must be >= 0");
    require(c.speed_limit > 0.0, "speed_limit must be > 0");
    require(c.tick > 0.0, "tick must be > 0");
    require(c.near_threshold > 0.0 && c.near_threshold < c.geometry.half_extent,
            "near_threshold must lie in (0, half_extent)");
    require(c.slow_factor > 0.0 && c.slow_factor < 1.0, "slow_factor must lie in (0, 1)");
    require(c.accel_max > 0.0 && c.decel_max > 0.0, "accel_max and decel_max must be > 0");
    require(c.connected_ratio >= 0.0 && c.connected_ratio <= 1.0, "connected_ratio must lie in [0, 1]");
    require(c.time_gap > 0.0, "time_gap must be > 0");
    require(c.vehicle_length > 0.0 && c.standstill_gap >= 0.0 && c.stop_margin >= 0.0,
            "vehicle dimensions must be non-negative");
    const auto& g = c.geometry;
    require(!g.ns_lights.empty() && !g.ew_lights.empty(), "geometry needs lights on both approaches");
    require(g.stop_line_offset > 0.0 && g.stop_line_offset < g.half_extent && g.half_extent < g.approach_length,
            "need 0 < stop_line_offset < half_extent < approach_length");
    try {
        validate(c.phase_table);
    } catch (const PhaseError& e) {
        throw ConfigInvalid(std::string("invalid simulation config: ") + e.what());
    }
}

double target_speed(LightColor state, double distance, double current_speed, double speed_limit,
                    double near_threshold, double slow_factor) {
    switch (state) {
        case LightColor::Green:
            return speed_limit;
        case LightColor::Red:
        case LightColor::Yellow:
        case LightColor::Unknown:
            if (distance < near_threshold) return 0.0;
            return slow_factor * current_speed;
    }
    return 0.0;
}

std::optional<ControllerDecision> controller_tick(const VehicleState& vehicle, const SignalStates& signals,
                                                  const IntersectionGeometry& geometry, const SimConfig& config) {
    if (!in_intersection_area(vehicle.position, geometry)) return std::nullopt;
    const SignalHead* head = governing_light(geometry, vehicle.route, vehicle.position);
    if (!head) return std::nullopt;

    const ApproachSignal& signal = signals.at(approach_of(vehicle.route));
    ControllerDecision d;
    d.light.light_id = head->id;
    d.light.state = signal.color;
    d.light.distance = distance(vehicle.position, head->position);
    d.light.green_remaining = signal.green_remaining;
    d.target_speed = target_speed(d.light.state, d.light.distance, vehicle.speed, config.speed_limit,
                                  config.near_threshold, config.slow_factor);
    d.velocity_command = vehicle.heading * d.target_speed;
    return d;
}

double baseline_tick(const VehicleState&, std::optional<double> leader_gap, const SimConfig& config) {
    if (!leader_gap) return config.speed_limit;
    return std::min(config.speed_limit, std::max(0.0, *leader_gap) / config.time_gap);
}

VehicleState physics_step(VehicleState v, double dt, const SimConfig& config) {
    const double before = v.speed;
    double next = before;
    if (v.command_speed > before) {
        next = std::min(v.command_speed, before + config.accel_max * dt);
    } else {
        next = std::max(v.command_speed, before - config.decel_max * dt);
    }
    next = std::clamp(next, 0.0, config.speed_limit);
    v.speed = next;
    v.accel = (next - before) / dt;
    v.position += v.heading * (next * dt);
    return v;
}

SignalPlayback::SignalPlayback(const PhaseTable& table, double tick) : phases_(table.phases), tick_(tick) {
    double acc = 0.0;
    for (const auto& p : phases_) {
        acc += p.duration;
        ends_.push_back(acc);
    }
    ticks_ = std::llround(acc / tick);
}

SignalStates SignalPlayback::at_tick(std::int64_t k) {
    constexpr double eps = 1e-9;
    const double t = static_cast<double>(k) * tick_;
    while (cursor_ + 1 < phases_.size() && t >= ends_[cursor_] - eps) ++cursor_;

    const auto signal = [&](Approach a) {
        ApproachSignal s;
        s.color = phases_[cursor_].color(a);
        if (s.color == LightColor::Green) {
            std::size_t j = cursor_;
            while (j + 1 < phases_.size() && phases_[j + 1].color(a) == LightColor::Green) ++j;
            s.green_remaining = std::max(0.0, ends_[j] - t);
        }
        return s;
    };
    return {signal(Approach::NorthSouth), signal(Approach::EastWest)};
}

namespace {

struct PendingSpawn {
    double time;
    TravelDirection route;
    bool connected;
};

// Uniform in [0, 1) from the top 53 bits; independent of the standard library's distributions.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<PendingSpawn> spawn_schedule(const SimConfig& config, double duration) {
    std::mt19937_64 rng(config.seed);
    std::vector<PendingSpawn> schedule;
    schedule.reserve(static_cast<std::size_t>(config.vehicle_count));
    for (int i = 0; i < config.vehicle_count; ++i) {
        const double time = unit_draw(rng) * duration;
        const auto route = kAllDirections[std::min<std::size_t>(3, static_cast<std::size_t>(unit_draw(rng) * 4.0))];
        const bool connected = unit_draw(rng) < config.connected_ratio;
        schedule.push_back({time, route, connected});
    }
    std::stable_sort(schedule.begin(), schedule.end(),
                     [](const PendingSpawn& a, const PendingSpawn& b) { return a.time < b.time; });
    return schedule;
}

std::size_t direction_index(TravelDirection d) { return static_cast<std::size_t>(d); }

}  // namespace

SimulationResult run_simulation(const SimConfig& config) {
    validate(config);
    const auto& geometry = config.geometry;

    SignalPlayback playback(config.phase_table, config.tick);
    SimulationResult result;
    result.ticks = playback.tick_count();
    result.duration = config.phase_table.total_duration();

    std::array<std::deque<PendingSpawn>, 4> pending;
    for (const auto& s : spawn_schedule(config, result.duration)) pending[direction_index(s.route)].push_back(s);

    const double despawn_at = geometry.approach_length * 2.0;
    std::vector<VehicleState> vehicles;
    int next_id = 1;

    for (std::int64_t k = 0; k < result.ticks; ++k) {
        const double t = static_cast<double>(k) * config.tick;
        const SignalStates signals = playback.at_tick(k);
        result.signals.push_back(signals);

        // Arrivals: at most one per lane per tick, and only onto a clear entry.
        for (auto d : kAllDirections) {
            auto& queue = pending[direction_index(d)];
            if (queue.empty() || queue.front().time > t + 1e-9) continue;
            std::optional<double> nearest;
            for (const auto& v : vehicles) {
                if (v.route != d) continue;
                const double s = geometry.along(d, v.position);
                if (!nearest || s < *nearest) nearest = s;
            }
            std::optional<double> gap;
            if (nearest) gap = *nearest - config.vehicle_length - config.standstill_gap;
            if (gap && *gap < 0.0) continue;

            VehicleState v;
            v.id = next_id++;
            v.route = d;
            v.heading = unit_heading(d);
            v.position = geometry.lane_entry(d);
            v.connected = queue.front().connected;
            v.speed = baseline_tick(v, gap, config);
            v.target_speed = v.command_speed = v.speed;
            vehicles.push_back(v);
            queue.pop_front();
            ++result.spawned;
        }

        std::vector<double> along(vehicles.size());
        for (std::size_t i = 0; i < vehicles.size(); ++i) {
            along[i] = geometry.along(vehicles[i].route, vehicles[i].position);
        }

        for (std::size_t i = 0; i < vehicles.size(); ++i) {
            auto& v = vehicles[i];
            const double s = along[i];

            std::optional<double> gap;
            for (std::size_t j = 0; j < vehicles.size(); ++j) {
                if (j == i || vehicles[j].route != v.route || along[j] <= s) continue;
                const double g = along[j] - s - config.vehicle_length - config.standstill_gap;
                if (!gap || g < *gap) gap = g;
            }

            // The cruise controller also holds at the stop line for a signal it
            // can still stop for; yellow is decided once, at its first tick.
            const SignalHead* head = governing_light(geometry, v.route, v.position);
            const ApproachSignal& signal = signals.at(approach_of(v.route));
            if (signal.color != LightColor::Yellow) v.stop_for_yellow.reset();
            if (head) {
                const double to_line = geometry.along(v.route, head->position) - s;
                if (signal.color == LightColor::Yellow && !v.stop_for_yellow) {
                    v.stop_for_yellow = to_line >= v.speed * v.speed / (2.0 * config.decel_max);
                }
                const bool hold = signal.color == LightColor::Red || signal.color == LightColor::Unknown ||
                                  (signal.color == LightColor::Yellow && *v.stop_for_yellow);
                if (hold) {
                    const double g = to_line - config.stop_margin;
                    if (!gap || g < *gap) gap = g;
                }
            }

            const double cruise = baseline_tick(v, gap, config);
            std::optional<ControllerDecision> decision;
            if (v.connected) decision = controller_tick(v, signals, geometry, config);
            if (decision) {
                v.target_speed = decision->target_speed;
                v.command_speed = std::min(decision->target_speed, cruise);
            } else {
                v.target_speed = cruise;
                v.command_speed = cruise;
            }

            TrajectoryRecord r;
            r.time = t;
            r.vehicle_id = v.id;
            r.x = v.position.x;
            r.y = v.position.y;
            r.heading = std::atan2(v.heading.y, v.heading.x);
            r.speed = v.speed;
            r.accel = v.accel;
            r.target_speed = v.target_speed;
            r.light_state = head ? signal.color : LightColor::Unknown;
            r.in_area = in_intersection_area(v.position, geometry);
            r.connected = v.connected;
            r.route = v.route;
            if (head) {
                r.light_distance = distance(v.position, head->position);
                r.green_remaining = signal.green_remaining;
            }
            r.command_speed = v.command_speed;
            r.controller_active = decision.has_value();
            result.records.push_back(r);
        }

        for (auto& v : vehicles) v = physics_step(v, config.tick, config);
        std::erase_if(vehicles, [&](const VehicleState& v) { return geometry.along(v.route, v.position) > despawn_at; });
    }
    return result;
}

}  // namespace spatgen
