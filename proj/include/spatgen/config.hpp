#pragma once

#include "spatgen/phase_builder.hpp"
#include "spatgen/sim.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace spatgen {

// Everything a configuration file can set. Every key is optional; missing keys
// keep the defaults below.
struct PipelineConfig {
    SimConfig sim;
    std::map<std::uint16_t, std::string> labels;  // intersection id -> display name
    ApproachMapping mapping = ApproachMapping::standard();
    int tz_offset_min = 0;
    double max_gap = 2.0;
    double bev_cell_size = 1.0;
};

nlohmann::ordered_json to_json(const SimConfig& config);
nlohmann::ordered_json to_json(const IntersectionGeometry& geometry);

/// Applies the keys present in `text` on top of `base`. Throws ConfigInvalid.
PipelineConfig parse_pipeline_config(std::string_view text, PipelineConfig base = {});

}  // namespace spatgen
