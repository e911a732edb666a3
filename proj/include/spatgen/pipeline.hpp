#pragma once

#include "spatgen/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace spatgen {

struct CommandOptions {
    std::filesystem::path input;
    std::filesystem::path out_dir = ".";
    std::optional<std::filesystem::path> config_file;
    bool force = false;
    bool strict = false;
    std::optional<std::uint16_t> intersection_id;
    std::optional<int> tz_offset_min;
    std::optional<std::uint64_t> seed;
    int bev_every = 0;  // raster every k ticks; 0 disables
    std::string stop_after = "simulate";  // generate only: decode|process|phases|simulate
};

struct StageReport {
    int exit_code = 0;
    std::size_t succeeded = 0;
    std::size_t skipped = 0;
    std::size_t failed = 0;
    std::vector<std::filesystem::path> outputs;
};

inline constexpr const char* kDecodedFile = "decoded.ndjson";
inline constexpr const char* kSnapshotFile = "snapshots.ndjson";
inline constexpr const char* kPhaseCsvFile = "phases.csv";
inline constexpr const char* kPhaseJsonFile = "phases.json";
inline constexpr const char* kTrajectoryFile = "trajectories.csv";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kBevDir = "bev";

/// Resolves --config plus the per-flag overrides.
PipelineConfig load_pipeline_config(const CommandOptions& options);

// Per-record failures are logged as "line N: <kind>: <detail>" and skipped; the
// exit code is non-zero only when every record failed, or on any failure with strict.
StageReport cmd_decode(const CommandOptions& options, std::ostream& log);
StageReport cmd_process(const CommandOptions& options, std::ostream& log);
StageReport cmd_phases(const CommandOptions& options, std::ostream& log);
StageReport cmd_simulate(const CommandOptions& options, std::ostream& log);
/// decode -> process -> phases -> simulate inside out_dir, keeping every intermediate.
StageReport cmd_generate(const CommandOptions& options, std::ostream& log);

}  // namespace spatgen
