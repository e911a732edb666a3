#include "spatgen/scenario_io.hpp"

#include "spatgen/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spatgen {

using nlohmann::ordered_json;

namespace {

void append_fixed(std::string& out, double value) {
    char buf[64];
    // Avoid printing "-0.000000".
    if (std::abs(value) < 5e-7) value = 0.0;
    std::snprintf(buf, sizeof buf, "%.6f", value);
    out += buf;
}

}  // namespace

std::string format_trajectories(std::span<const TrajectoryRecord> records) {
    std::vector<const TrajectoryRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->time != b->time) return a->time < b->time;
        return a->vehicle_id < b->vehicle_id;
    });

    std::string out(kTrajectoryHeader);
    out += '\n';
    out.reserve(out.size() + records.size() * 96);
    for (const auto* r : order) {
        append_fixed(out, r->time);
        out += ',';
        out += std::to_string(r->vehicle_id);
        for (double v : {r->x, r->y, r->heading, r->speed, r->accel, r->target_speed}) {
            out += ',';
            append_fixed(out, v);
        }
        out += ',';
        out += to_string(r->light_state);
        out += r->in_area ? ",1" : ",0";
        out += r->connected ? ",1\n" : ",0\n";
    }
    return out;
}

void export_trajectories(std::span<const TrajectoryRecord> records, const std::filesystem::path& destination) {
    write_text_file(destination, format_trajectories(records));
}

std::vector<TrajectoryRecord> parse_trajectories(std::string_view csv) {
    std::istringstream is{std::string(csv)};
    std::string line;
    if (!std::getline(is, line) || line != kTrajectoryHeader) {
        throw IoFailure("trajectory CSV: unexpected header");
    }
    std::vector<TrajectoryRecord> out;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cells.size() != 11) throw IoFailure("trajectory CSV: row " + std::to_string(row) + " needs 11 columns");
        try {
            TrajectoryRecord r;
            r.time = std::stod(cells[0]);
            r.vehicle_id = std::stoi(cells[1]);
            r.x = std::stod(cells[2]);
            r.y = std::stod(cells[3]);
            r.heading = std::stod(cells[4]);
            r.speed = std::stod(cells[5]);
            r.accel = std::stod(cells[6]);
            r.target_speed = std::stod(cells[7]);
            auto color = light_color_from_string(cells[8]);
            if (!color) throw std::invalid_argument(cells[8]);
            r.light_state = *color;
            r.in_area = cells[9] == "1";
            r.connected = cells[10] == "1";
            out.push_back(r);
        } catch (const std::logic_error&) {
            throw IoFailure("trajectory CSV: row " + std::to_string(row) + " is not numeric");
        }
    }
    return out;
}

GridSpec GridSpec::covering(const IntersectionGeometry& geometry, double cell_size) {
    GridSpec spec;
    spec.cell_size = cell_size;
    spec.origin = geometry.center - Vec2{geometry.half_extent, geometry.half_extent};
    spec.width = static_cast<int>(std::ceil(2.0 * geometry.half_extent / cell_size - 1e-9));
    spec.height = spec.width;
    return spec;
}

std::size_t OccupancyGrid::marked() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](auto c) { return c != 0; }));
}

OccupancyGrid rasterize_bev(std::span<const TrajectoryRecord> records, const GridSpec& spec) {
    if (!(spec.cell_size > 0.0) || spec.width <= 0 || spec.height <= 0) {
        throw std::invalid_argument("grid needs a positive cell size and extent");
    }
    OccupancyGrid grid;
    grid.origin = spec.origin;
    grid.cell_size = spec.cell_size;
    grid.width = spec.width;
    grid.height = spec.height;
    grid.cells.assign(static_cast<std::size_t>(spec.width) * spec.height, 0);

    const auto cell_of = [&](double v, double o) { return static_cast<long>(std::floor((v - o) / spec.cell_size)); };
    for (const auto& r : records) {
        const long cx = cell_of(r.x, spec.origin.x);
        const long cy = cell_of(r.y, spec.origin.y);
        if (cx < 0 || cy < 0 || cx >= spec.width || cy >= spec.height) {
            grid.skipped.push_back(r.vehicle_id);
            continue;
        }
        if (spec.footprint_length <= 0.0 || spec.footprint_width <= 0.0) {
            grid.cells[static_cast<std::size_t>(cy) * spec.width + cx] = 1;
            continue;
        }
        // Rectangle trailing the front bumper along the heading.
        const Vec2 fwd{std::cos(r.heading), std::sin(r.heading)};
        const Vec2 side{-fwd.y, fwd.x};
        const Vec2 front{r.x, r.y};
        const int steps_l = std::max(1, static_cast<int>(std::ceil(spec.footprint_length / (spec.cell_size * 0.5))));
        const int steps_w = std::max(1, static_cast<int>(std::ceil(spec.footprint_width / (spec.cell_size * 0.5))));
        for (int i = 0; i <= steps_l; ++i) {
            for (int j = 0; j <= steps_w; ++j) {
                const Vec2 p = front - fwd * (spec.footprint_length * i / steps_l) +
                               side * (spec.footprint_width * (static_cast<double>(j) / steps_w - 0.5));
                const long px = cell_of(p.x, spec.origin.x);
                const long py = cell_of(p.y, spec.origin.y);
                if (px < 0 || py < 0 || px >= spec.width || py >= spec.height) continue;
                grid.cells[static_cast<std::size_t>(py) * spec.width + px] = 1;
            }
        }
    }
    return grid;
}

std::string to_pgm(const OccupancyGrid& grid) {
    std::string out = "P2\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n1\n";
    for (int row = grid.height - 1; row >= 0; --row) {
        for (int col = 0; col < grid.width; ++col) {
            if (col > 0) out += ' ';
            out += grid.occupied(col, row) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

std::string digest_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_manifest(const SimConfig& config, const RunOutputs& outputs) {
    ordered_json doc = ordered_json::object();
    doc["version"] = std::string(kVersionLabel);
    doc["seed"] = config.seed;
    doc["config"] = to_json(config);

    ordered_json table = ordered_json::object();
    table["digest"] = "fnv1a64:" + digest_hex(outputs.phase_table_csv);
    table["phases"] = config.phase_table.phases.size();
    table["cycles"] = config.phase_table.cycle_boundaries.size() + 1;
    table["duration"] = config.phase_table.total_duration();
    doc["phase_table"] = std::move(table);

    ordered_json counts = ordered_json::object();
    counts["trajectory_rows"] = outputs.record_count;
    counts["vehicles_spawned"] = outputs.vehicles_spawned;
    counts["ticks"] = outputs.ticks;
    counts["duration"] = outputs.duration;
    counts["bev_frames"] = outputs.bev_frames;
    doc["records"] = std::move(counts);

    // Camera geometry for downstream renderers; nothing here is rendered.
    const auto camera = [](const char* role, ordered_json extra) {
        ordered_json j = ordered_json::object();
        j["role"] = role;
        j["resolution"] = {640, 480};
        j["fov_deg"] = 110;
        for (auto& [k, v] : extra.items()) j[k] = v;
        return j;
    };
    ordered_json sensors = ordered_json::object();
    sensors["rgb"] = camera("standard visual", ordered_json::object());
    sensors["semantic"] = camera("scene segmentation", ordered_json::object());
    sensors["depth"] = camera("distance measurement", ordered_json::object());
    sensors["bev"] = camera("overhead", {{"height_m", 25}, {"pitch_deg", -90}});
    sensors["roadside"] = camera("roadside", {{"height_m", 20}, {"pitch_deg", -50}, {"yaw_deg", 25}});
    doc["sensors"] = std::move(sensors);
    return doc.dump(2) + "\n";
}

void write_manifest(const SimConfig& config, const RunOutputs& outputs, const std::filesystem::path& destination) {
    write_text_file(destination, format_manifest(config, outputs));
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoFailure("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace spatgen
