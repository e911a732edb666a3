#pragma once

#include "spatgen/spat_state.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatgen {

enum class Approach { NorthSouth, EastWest };

std::string_view to_string(Approach approach);

enum class PhaseErrc {
    UnmappedGroup,
    EmptyStream,
    NonMonotonicTime,
    GapTooLarge,
    SamplePeriodTooCoarse,
    InvalidTable,
    BadTableText,
};

const char* to_string(PhaseErrc kind);

class PhaseError : public std::runtime_error {
public:
    PhaseError(PhaseErrc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    PhaseErrc kind() const noexcept { return kind_; }

private:
    PhaseErrc kind_;
};

struct ApproachMapping {
    std::map<std::uint8_t, Approach> groups;

    /// {1,2,5,6} north-south, {3,4,7,8} east-west.
    static ApproachMapping standard();

    std::vector<std::uint8_t> groups_of(Approach approach) const;
    bool operator==(const ApproachMapping&) const = default;
};

struct Phase {
    double duration = 0.0;  // seconds
    LightColor ns_color = LightColor::Unknown;
    LightColor ew_color = LightColor::Unknown;

    LightColor color(Approach approach) const noexcept {
        return approach == Approach::NorthSouth ? ns_color : ew_color;
    }
    bool operator==(const Phase&) const = default;
};

struct PhaseTable {
    std::vector<Phase> phases;
    // Phase indices (> 0) at which the first color pair recurs.
    std::vector<std::size_t> cycle_boundaries;

    double total_duration() const noexcept;
    bool operator==(const PhaseTable&) const = default;
};

/// Marks each recurrence of the first phase's color pair as a cycle start.
std::vector<std::size_t> find_cycle_boundaries(const std::vector<Phase>& phases);

/// Throws InvalidTable unless durations are positive, neighbours differ and no
/// phase shows green on both approaches.
void validate(const PhaseTable& table);

/// The three cycles of the Park/Dayton schedule, for fixtures and defaults.
PhaseTable reference_phase_table();

/// Most restrictive color among the approach's groups (Red > Yellow > Green > Unknown).
LightColor approach_color(const SignalSnapshot& snap, const ApproachMapping& mapping, Approach approach);

struct BuildOptions {
    double max_gap = 2.0;  // seconds between consecutive snapshots
};

PhaseTable build_phase_table(const std::vector<SignalSnapshot>& snapshots, const ApproachMapping& mapping,
                             const BuildOptions& options = {});

struct SynthesisOptions {
    std::uint32_t start_moy = 0;
    std::uint16_t intersection_id = 0;
    std::string label = "synthetic";
};

/// Samples the table every `sample_period` seconds from its start. Every mapped
/// group carries the time until its approach next changes color.
std::vector<SignalSnapshot> synthesize_stream(const PhaseTable& table, double sample_period,
                                              const ApproachMapping& mapping,
                                              const SynthesisOptions& options = {});

// Phase-table files: columns phase (index within cycle, from 1), duration,
// north_south, east_west.
std::string to_phase_csv(const PhaseTable& table);
std::string to_phase_json(const PhaseTable& table);
PhaseTable parse_phase_table(std::string_view text);  // CSV or JSON

}  // namespace spatgen
