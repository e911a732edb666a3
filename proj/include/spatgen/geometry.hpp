#pragma once

#include "spatgen/phase_builder.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatgen {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
    friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double k) noexcept { return {a.x * k, a.y * k}; }
    friend Vec2 operator/(Vec2 a, double k) noexcept { return {a.x / k, a.y / k}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) noexcept { return norm(a - b); }

// Through movements only; the direction of travel names the route.
enum class TravelDirection { Southbound, Northbound, Westbound, Eastbound };

inline constexpr TravelDirection kAllDirections[] = {TravelDirection::Southbound, TravelDirection::Northbound,
                                                     TravelDirection::Westbound, TravelDirection::Eastbound};

std::string_view to_string(TravelDirection d);
std::optional<TravelDirection> travel_direction_from_string(std::string_view text);
Vec2 unit_heading(TravelDirection d);
Approach approach_of(TravelDirection d);

struct SignalHead {
    int id = 0;
    TravelDirection governs = TravelDirection::Southbound;
    Vec2 position;

    bool operator==(const SignalHead&) const = default;
};

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Arithmetic mean of every signal-head position; throws GeometryError when both lists are empty.
Vec2 intersection_center(std::span<const Vec2> ns_lights, std::span<const Vec2> ew_lights);

struct IntersectionGeometry {
    std::vector<SignalHead> ns_lights;  // govern north/southbound travel
    std::vector<SignalHead> ew_lights;  // govern east/westbound travel
    Vec2 center;                        // centroid of all heads
    double half_extent = 35.0;
    double stop_line_offset = 15.0;
    double approach_length = 200.0;
    double lane_offset = 1.75;  // right-hand traffic, lane centre from the axis

    /// One head per direction, placed on the lane centre at its stop line.
    static IntersectionGeometry four_way(Vec2 center = {}, double half_extent = 35.0,
                                         double stop_line_offset = 15.0, double approach_length = 200.0,
                                         double lane_offset = 1.75);

    /// Recomputes `center` from the heads and checks the distance ordering.
    void finalize();

    Vec2 lane_entry(TravelDirection d) const;
    Vec2 lane_point(TravelDirection d, double along) const;  // `along` metres from the entry
    // Longitudinal coordinate from the lane entry.
    double along(TravelDirection d, Vec2 p) const;

    bool operator==(const IntersectionGeometry&) const = default;
};

/// Axis-aligned square of half-width half_extent around the centre; boundary inclusive.
bool in_intersection_area(Vec2 point, const IntersectionGeometry& geometry);

/// Head on the vehicle's direction whose position lies ahead along its heading;
/// nearest wins. Null when the vehicle has passed every head for its direction.
const SignalHead* governing_light(const IntersectionGeometry& geometry, TravelDirection d, Vec2 position);

}  // namespace spatgen
