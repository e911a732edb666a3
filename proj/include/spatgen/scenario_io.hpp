#pragma once

#include "spatgen/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatgen {

class IoFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kTrajectoryHeader =
    "time,vehicle_id,x,y,heading,speed,accel,target_speed,light_state,in_area,connected";

/// Rows sorted by (time, vehicle_id), numbers at six decimals.
std::string format_trajectories(std::span<const TrajectoryRecord> records);
void export_trajectories(std::span<const TrajectoryRecord> records, const std::filesystem::path& destination);
/// Reads back the exported columns; the in-process extras stay default.
std::vector<TrajectoryRecord> parse_trajectories(std::string_view csv);

struct GridSpec {
    Vec2 origin;  // lower-left corner of cell (0, 0)
    double cell_size = 1.0;
    int width = 70;
    int height = 70;
    // Zero footprint marks only the cell holding the position.
    double footprint_length = 0.0;
    double footprint_width = 0.0;

    /// 1 m cells over the intersection square.
    static GridSpec covering(const IntersectionGeometry& geometry, double cell_size = 1.0);
};

struct OccupancyGrid {
    Vec2 origin;
    double cell_size = 1.0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;  // row-major, row 0 at origin.y
    std::vector<int> skipped;         // vehicles outside the grid

    bool occupied(int ix, int iy) const { return cells.at(static_cast<std::size_t>(iy) * width + ix) != 0; }
    std::size_t marked() const;
};

OccupancyGrid rasterize_bev(std::span<const TrajectoryRecord> records, const GridSpec& spec);

/// Plain-text graymap, top row = highest y, occupied = 1.
std::string to_pgm(const OccupancyGrid& grid);

/// 64-bit FNV-1a, lowercase hex.
std::string digest_hex(std::string_view bytes);

struct RunOutputs {
    std::size_t record_count = 0;
    int vehicles_spawned = 0;
    std::int64_t ticks = 0;
    double duration = 0.0;
    std::size_t bev_frames = 0;
    std::string phase_table_csv;  // the exact bytes the digest covers
};

inline constexpr std::string_view kVersionLabel = "spatgen 0.1.0";

std::string format_manifest(const SimConfig& config, const RunOutputs& outputs);
void write_manifest(const SimConfig& config, const RunOutputs& outputs, const std::filesystem::path& destination);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace spatgen
