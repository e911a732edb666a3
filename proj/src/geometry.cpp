#include "spatgen/geometry.hpp"

#include <limits>

namespace spatgen {

std::string_view to_string(TravelDirection d) {
    switch (d) {
        case TravelDirection::Southbound: return "southbound";
        case TravelDirection::Northbound: return "northbound";
        case TravelDirection::Westbound: return "westbound";
        case TravelDirection::Eastbound: return "eastbound";
    }
    return "?";
}

std::optional<TravelDirection> travel_direction_from_string(std::string_view text) {
    for (auto d : kAllDirections) {
        if (to_string(d) == text) return d;
    }
    return std::nullopt;
}

Vec2 unit_heading(TravelDirection d) {
    switch (d) {
        case TravelDirection::Southbound: return {0.0, -1.0};
        case TravelDirection::Northbound: return {0.0, 1.0};
        case TravelDirection::Westbound: return {-1.0, 0.0};
        case TravelDirection::Eastbound: return {1.0, 0.0};
    }
    return {1.0, 0.0};
}

Approach approach_of(TravelDirection d) {
    return d == TravelDirection::Southbound || d == TravelDirection::Northbound ? Approach::NorthSouth
                                                                                : Approach::EastWest;
}

Vec2 intersection_center(std::span<const Vec2> ns_lights, std::span<const Vec2> ew_lights) {
    const std::size_t count = ns_lights.size() + ew_lights.size();
    if (count == 0) throw GeometryError("intersection has no traffic lights");
    Vec2 sum;
    for (const auto& p : ns_lights) sum += p;
    for (const auto& p : ew_lights) sum += p;
    return sum / static_cast<double>(count);
}

namespace {

Vec2 right_of(Vec2 heading) { return {heading.y, -heading.x}; }

}  // namespace

IntersectionGeometry IntersectionGeometry::four_way(Vec2 center, double half_extent, double stop_line_offset,
                                                    double approach_length, double lane_offset) {
    IntersectionGeometry g;
    g.center = center;
    g.half_extent = half_extent;
    g.stop_line_offset = stop_line_offset;
    g.approach_length = approach_length;
    g.lane_offset = lane_offset;
    int id = 1;
    for (auto d : kAllDirections) {
        const Vec2 h = unit_heading(d);
        SignalHead head{id++, d, center - h * stop_line_offset + right_of(h) * lane_offset};
        (approach_of(d) == Approach::NorthSouth ? g.ns_lights : g.ew_lights).push_back(head);
    }
    g.finalize();
    return g;
}

void IntersectionGeometry::finalize() {
    if (ns_lights.empty() || ew_lights.empty()) {
        throw GeometryError("both approaches need at least one traffic light");
    }
    for (const auto& h : ns_lights) {
        if (approach_of(h.governs) != Approach::NorthSouth) throw GeometryError("NS light governs EW travel");
    }
    for (const auto& h : ew_lights) {
        if (approach_of(h.governs) != Approach::EastWest) throw GeometryError("EW light governs NS travel");
    }
    if (!(stop_line_offset < half_extent && half_extent < approach_length) || !(stop_line_offset > 0.0)) {
        throw GeometryError("need 0 < stop_line_offset < half_extent < approach_length");
    }
    std::vector<Vec2> ns, ew;
    for (const auto& h : ns_lights) ns.push_back(h.position);
    for (const auto& h : ew_lights) ew.push_back(h.position);
    center = intersection_center(ns, ew);
}

Vec2 IntersectionGeometry::lane_entry(TravelDirection d) const {
    const Vec2 h = unit_heading(d);
    return center - h * approach_length + right_of(h) * lane_offset;
}

Vec2 IntersectionGeometry::lane_point(TravelDirection d, double s) const {
    return lane_entry(d) + unit_heading(d) * s;
}

double IntersectionGeometry::along(TravelDirection d, Vec2 p) const {
    return dot(p - lane_entry(d), unit_heading(d));
}

bool in_intersection_area(Vec2 point, const IntersectionGeometry& geometry) {
    return std::abs(point.x - geometry.center.x) <= geometry.half_extent &&
           std::abs(point.y - geometry.center.y) <= geometry.half_extent;
}

const SignalHead* governing_light(const IntersectionGeometry& geometry, TravelDirection d, Vec2 position) {
    const auto& heads = approach_of(d) == Approach::NorthSouth ? geometry.ns_lights : geometry.ew_lights;
    const Vec2 h = unit_heading(d);
    const SignalHead* best = nullptr;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& head : heads) {
        if (head.governs != d || dot(head.position - position, h) < 0.0) continue;
        const double dist = distance(head.position, position);
        if (dist < best_distance) {
            best = &head;
            best_distance = dist;
        }
    }
    return best;
}

}  // namespace spatgen
