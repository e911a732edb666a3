#pragma once

#include "spatgen/geometry.hpp"
#include "spatgen/phase_builder.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatgen {

class ConfigInvalid : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SimConfig {
    int vehicle_count = 100;
    double speed_limit = 15.0;     // m/s
    double tick = 0.1;             // s
    double near_threshold = 10.0;  // m
    double slow_factor = 0.5;
    double accel_max = 3.0;  // m/s^2
    double decel_max = 5.0;  // m/s^2
    std::uint64_t seed = 42;
    double connected_ratio = 1.0;  // share of spawned vehicles running the intersection controller
    // Baseline cruise controller.
    double time_gap = 1.5;        // s
    double vehicle_length = 4.5;  // m
    double standstill_gap = 2.0;  // m, bumper to bumper
    double stop_margin = 1.0;     // m short of the stop line when holding for a signal
    PhaseTable phase_table = reference_phase_table();
    IntersectionGeometry geometry = IntersectionGeometry::four_way();
};

/// Throws ConfigInvalid describing the first violated constraint.
void validate(const SimConfig& config);

struct VehicleState {
    int id = 0;
    TravelDirection route = TravelDirection::Southbound;
    Vec2 position;  // front bumper
    Vec2 heading{0.0, -1.0};
    double speed = 0.0;
    double target_speed = 0.0;   // controller output recorded in trajectories
    double command_speed = 0.0;  // what the actuator tracks
    double accel = 0.0;          // last applied
    bool connected = true;
    // Stop-or-go choice made at the first tick of the current yellow.
    std::optional<bool> stop_for_yellow;
};

struct ApproachSignal {
    LightColor color = LightColor::Unknown;
    double green_remaining = 0.0;  // s, zero unless green
};

struct SignalStates {
    ApproachSignal north_south;
    ApproachSignal east_west;

    const ApproachSignal& at(Approach a) const noexcept {
        return a == Approach::NorthSouth ? north_south : east_west;
    }
};

struct TrafficLightView {
    int light_id = 0;
    LightColor state = LightColor::Unknown;
    double distance = 0.0;
    double green_remaining = 0.0;
};

/// The proactive speed rule: stop when close to a red or yellow head, otherwise
/// shed speed by slow_factor; green runs at the limit. Unknown counts as red.
double target_speed(LightColor state, double distance, double current_speed, double speed_limit,
                    double near_threshold = 10.0, double slow_factor = 0.5);

struct ControllerDecision {
    TrafficLightView light;
    double target_speed = 0.0;
    Vec2 velocity_command;  // heading scaled by target_speed
};

/// Empty when the vehicle is outside the intersection area or no head governs it;
/// the baseline target then stands.
std::optional<ControllerDecision> controller_tick(const VehicleState& vehicle, const SignalStates& signals,
                                                  const IntersectionGeometry& geometry, const SimConfig& config);

/// Constant-time-gap cruise: min(limit, gap / time_gap), or the limit on a free road.
/// `leader_gap` is the usable distance to whatever the vehicle must not pass.
double baseline_tick(const VehicleState& vehicle, std::optional<double> leader_gap, const SimConfig& config);

/// Rate-limited tracking of command_speed, then semi-implicit position update.
VehicleState physics_step(VehicleState vehicle, double dt, const SimConfig& config);

// Replays a phase table tick by tick; the cursor only moves forward.
class SignalPlayback {
public:
    SignalPlayback(const PhaseTable& table, double tick);

    std::int64_t tick_count() const noexcept { return ticks_; }
    SignalStates at_tick(std::int64_t k);

private:
    std::vector<Phase> phases_;
    double tick_;
    std::vector<double> ends_;
    std::size_t cursor_ = 0;
    std::int64_t ticks_ = 0;
};

struct TrajectoryRecord {
    double time = 0.0;
    int vehicle_id = 0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, atan2 of the forward vector
    double speed = 0.0;
    double accel = 0.0;
    double target_speed = 0.0;
    LightColor light_state = LightColor::Unknown;
    bool in_area = false;
    bool connected = false;

    // Not exported; kept for in-process checks.
    TravelDirection route = TravelDirection::Southbound;
    std::optional<double> light_distance;
    double green_remaining = 0.0;
    double command_speed = 0.0;
    bool controller_active = false;

    bool operator==(const TrajectoryRecord&) const = default;
};

struct SimulationResult {
    std::vector<TrajectoryRecord> records;  // per tick, ascending vehicle id
    std::vector<SignalStates> signals;      // one entry per tick
    std::int64_t ticks = 0;
    double duration = 0.0;
    int spawned = 0;
};

SimulationResult run_simulation(const SimConfig& config);

}  // namespace spatgen
