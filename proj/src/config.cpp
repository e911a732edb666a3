#include "spatgen/config.hpp"

namespace spatgen {

using nlohmann::ordered_json;

ordered_json to_json(const IntersectionGeometry& g) {
    ordered_json j = ordered_json::object();
    j["center"] = {g.center.x, g.center.y};
    j["half_extent"] = g.half_extent;
    j["stop_line_offset"] = g.stop_line_offset;
    j["approach_length"] = g.approach_length;
    j["lane_offset"] = g.lane_offset;
    ordered_json lights = ordered_json::array();
    for (const auto* list : {&g.ns_lights, &g.ew_lights}) {
        for (const auto& h : *list) {
            ordered_json l = ordered_json::object();
            l["id"] = h.id;
            l["governs"] = std::string(to_string(h.governs));
            l["position"] = {h.position.x, h.position.y};
            lights.push_back(std::move(l));
        }
    }
    j["lights"] = std::move(lights);
    return j;
}

ordered_json to_json(const SimConfig& c) {
    ordered_json j = ordered_json::object();
    j["vehicle_count"] = c.vehicle_count;
    j["speed_limit"] = c.speed_limit;
    j["tick"] = c.tick;
    j["near_threshold"] = c.near_threshold;
    j["slow_factor"] = c.slow_factor;
    j["accel_max"] = c.accel_max;
    j["decel_max"] = c.decel_max;
    j["seed"] = c.seed;
    j["connected_ratio"] = c.connected_ratio;
    j["time_gap"] = c.time_gap;
    j["vehicle_length"] = c.vehicle_length;
    j["standstill_gap"] = c.standstill_gap;
    j["stop_margin"] = c.stop_margin;
    j["duration_policy"] = "first cycle start to last cycle end";
    j["geometry"] = to_json(c.geometry);
    return j;
}

namespace {

Vec2 read_point(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigInvalid("point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void maybe(const ordered_json& obj, const char* key, T& field) {
    if (auto it = obj.find(key); it != obj.end()) field = it->get<T>();
}

IntersectionGeometry read_geometry(const ordered_json& j, const IntersectionGeometry& base) {
    Vec2 center = base.center;
    double half_extent = base.half_extent, stop_line = base.stop_line_offset;
    double approach = base.approach_length, lane = base.lane_offset;
    if (auto it = j.find("center"); it != j.end()) center = read_point(*it);
    maybe(j, "half_extent", half_extent);
    maybe(j, "stop_line_offset", stop_line);
    maybe(j, "approach_length", approach);
    maybe(j, "lane_offset", lane);

    auto lights = j.find("lights");
    if (lights == j.end()) {
        return IntersectionGeometry::four_way(center, half_extent, stop_line, approach, lane);
    }
    IntersectionGeometry g;
    g.half_extent = half_extent;
    g.stop_line_offset = stop_line;
    g.approach_length = approach;
    g.lane_offset = lane;
    int next_id = 1;
    for (const auto& l : *lights) {
        SignalHead h;
        h.id = l.value("id", next_id);
        next_id = h.id + 1;
        auto governs = travel_direction_from_string(l.at("governs").get<std::string>());
        if (!governs) throw ConfigInvalid("light 'governs' must be a travel direction");
        h.governs = *governs;
        h.position = read_point(l.at("position"));
        (approach_of(h.governs) == Approach::NorthSouth ? g.ns_lights : g.ew_lights).push_back(h);
    }
    g.finalize();
    return g;
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view text, PipelineConfig base) {
    ordered_json doc = ordered_json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw ConfigInvalid("config is not a JSON object");
    PipelineConfig out = std::move(base);
    try {
        auto& s = out.sim;
        maybe(doc, "vehicle_count", s.vehicle_count);
        maybe(doc, "speed_limit", s.speed_limit);
        maybe(doc, "tick", s.tick);
        maybe(doc, "near_threshold", s.near_threshold);
        maybe(doc, "slow_factor", s.slow_factor);
        maybe(doc, "accel_max", s.accel_max);
        maybe(doc, "decel_max", s.decel_max);
        maybe(doc, "seed", s.seed);
        maybe(doc, "connected_ratio", s.connected_ratio);
        maybe(doc, "time_gap", s.time_gap);
        maybe(doc, "vehicle_length", s.vehicle_length);
        maybe(doc, "standstill_gap", s.standstill_gap);
        maybe(doc, "stop_margin", s.stop_margin);
        if (auto g = doc.find("geometry"); g != doc.end()) s.geometry = read_geometry(*g, s.geometry);

        if (auto labels = doc.find("labels"); labels != doc.end()) {
            for (const auto& [id, name] : labels->items()) {
                const int value = std::stoi(id);
                if (value < 0 || value > 65535) throw ConfigInvalid("label id out of range");
                out.labels[static_cast<std::uint16_t>(value)] = name.get<std::string>();
            }
        }
        if (auto m = doc.find("approach_mapping"); m != doc.end()) {
            ApproachMapping mapping;
            for (auto g : m->at("north_south").get<std::vector<int>>()) {
                mapping.groups[static_cast<std::uint8_t>(g)] = Approach::NorthSouth;
            }
            for (auto g : m->at("east_west").get<std::vector<int>>()) {
                mapping.groups[static_cast<std::uint8_t>(g)] = Approach::EastWest;
            }
            if (mapping.groups_of(Approach::NorthSouth).empty() || mapping.groups_of(Approach::EastWest).empty()) {
                throw ConfigInvalid("approach_mapping needs groups on both approaches");
            }
            out.mapping = std::move(mapping);
        }
        maybe(doc, "tz_offset_min", out.tz_offset_min);
        maybe(doc, "max_gap", out.max_gap);
        maybe(doc, "bev_cell_size", out.bev_cell_size);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("config: ") + e.what());
    } catch (const GeometryError& e) {
        throw ConfigInvalid(std::string("config geometry: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigInvalid(std::string("config: ") + e.what());
    }
    if (!(out.bev_cell_size > 0.0)) throw ConfigInvalid("bev_cell_size must be > 0");
    if (!(out.max_gap > 0.0)) throw ConfigInvalid("max_gap must be > 0");
    return out;
}

}  // namespace spatgen
