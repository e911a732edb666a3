#include "spatgen/phase_builder.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace spatgen {

using nlohmann::ordered_json;

std::string_view to_string(Approach approach) {
    return approach == Approach::NorthSouth ? "NorthSouth" : "EastWest";
}

const char* to_string(PhaseErrc kind) {
    switch (kind) {
        case PhaseErrc::UnmappedGroup: return "UnmappedGroup";
        case PhaseErrc::EmptyStream: return "EmptyStream";
        case PhaseErrc::NonMonotonicTime: return "NonMonotonicTime";
        case PhaseErrc::GapTooLarge: return "GapTooLarge";
        case PhaseErrc::SamplePeriodTooCoarse: return "SamplePeriodTooCoarse";
        case PhaseErrc::InvalidTable: return "InvalidTable";
        case PhaseErrc::BadTableText: return "BadTableText";
    }
    return "?";
}

ApproachMapping ApproachMapping::standard() {
    ApproachMapping m;
    for (std::uint8_t g : {1, 2, 5, 6}) m.groups[g] = Approach::NorthSouth;
    for (std::uint8_t g : {3, 4, 7, 8}) m.groups[g] = Approach::EastWest;
    return m;
}

std::vector<std::uint8_t> ApproachMapping::groups_of(Approach approach) const {
    std::vector<std::uint8_t> out;
    for (const auto& [group, a] : groups) {
        if (a == approach) out.push_back(group);
    }
    return out;
}

double PhaseTable::total_duration() const noexcept {
    double total = 0.0;
    for (const auto& p : phases) total += p.duration;
    return total;
}

std::vector<std::size_t> find_cycle_boundaries(const std::vector<Phase>& phases) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < phases.size(); ++i) {
        if (phases[i].ns_color == phases[0].ns_color && phases[i].ew_color == phases[0].ew_color) {
            out.push_back(i);
        }
    }
    return out;
}

void validate(const PhaseTable& table) {
    if (table.phases.empty()) throw PhaseError(PhaseErrc::InvalidTable, "phase table is empty");
    for (std::size_t i = 0; i < table.phases.size(); ++i) {
        const auto& p = table.phases[i];
        const std::string where = "phase " + std::to_string(i);
        if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
            throw PhaseError(PhaseErrc::InvalidTable, where + " has non-positive duration");
        }
        if (p.ns_color == LightColor::Green && p.ew_color == LightColor::Green) {
            throw PhaseError(PhaseErrc::InvalidTable, where + " is green on both approaches");
        }
        if (i > 0 && p.ns_color == table.phases[i - 1].ns_color &&
            p.ew_color == table.phases[i - 1].ew_color) {
            throw PhaseError(PhaseErrc::InvalidTable, where + " repeats the previous color pair");
        }
    }
}

PhaseTable reference_phase_table() {
    using C = LightColor;
    PhaseTable t;
    for (double green : {28.0, 35.0, 35.0}) {
        t.phases.push_back({green, C::Green, C::Red});
        t.phases.push_back({3.0, C::Yellow, C::Red});
        t.phases.push_back({20.0, C::Red, C::Green});
        t.phases.push_back({3.0, C::Red, C::Yellow});
    }
    t.cycle_boundaries = find_cycle_boundaries(t.phases);
    return t;
}

namespace {

int restrictiveness(LightColor c) {
    switch (c) {
        case LightColor::Unknown: return 0;
        case LightColor::Green: return 1;
        case LightColor::Yellow: return 2;
        case LightColor::Red: return 3;
    }
    return 0;
}

struct ColorPair {
    LightColor ns;
    LightColor ew;
    bool operator==(const ColorPair&) const = default;
};

double round_duration(std::int64_t ms) {
    const double seconds = static_cast<double>(ms) / 1000.0;
    const double nearest = std::round(seconds);
    return std::abs(seconds - nearest) <= 0.25 ? nearest : seconds;
}

// Smallest remaining time (ms) among groups on the given approaches.
std::optional<std::int64_t> min_remaining_ms(const SignalSnapshot& snap, const ApproachMapping& mapping,
                                             bool ns, bool ew) {
    std::optional<std::int64_t> best;
    for (const auto& [group, g] : snap.groups) {
        if (!g.remaining) continue;
        const Approach a = mapping.groups.at(group);
        if ((a == Approach::NorthSouth && !ns) || (a == Approach::EastWest && !ew)) continue;
        const auto ms = std::llround(*g.remaining * 1000.0);
        if (!best || ms < *best) best = ms;
    }
    return best;
}

std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }

std::string format_duration(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    std::string s = buf;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::vector<int> phase_indices(const PhaseTable& table) {
    std::vector<int> idx;
    int k = 0;
    for (std::size_t i = 0; i < table.phases.size(); ++i) {
        if (std::find(table.cycle_boundaries.begin(), table.cycle_boundaries.end(), i) !=
            table.cycle_boundaries.end()) {
            k = 0;
        }
        idx.push_back(++k);
    }
    return idx;
}

[[noreturn]] void bad_table(const std::string& why) {
    throw PhaseError(PhaseErrc::BadTableText, "phase table: " + why);
}

LightColor parse_color(const std::string& text) {
    auto c = light_color_from_string(text);
    if (!c) bad_table("unknown color '" + text + "'");
    return *c;
}

MovementPhaseState representative_state(LightColor c) {
    switch (c) {
        case LightColor::Green: return MovementPhaseState::ProtectedMovementAllowed;
        case LightColor::Yellow: return MovementPhaseState::ProtectedClearance;
        case LightColor::Red: return MovementPhaseState::StopAndRemain;
        case LightColor::Unknown: return MovementPhaseState::Dark;
    }
    return MovementPhaseState::Dark;
}

}  // namespace

LightColor approach_color(const SignalSnapshot& snap, const ApproachMapping& mapping, Approach approach) {
    LightColor result = LightColor::Unknown;
    for (const auto& [group, g] : snap.groups) {
        auto it = mapping.groups.find(group);
        if (it == mapping.groups.end()) {
            throw PhaseError(PhaseErrc::UnmappedGroup,
                             "signal group " + std::to_string(group) + " has no approach");
        }
        if (it->second != approach) continue;
        const LightColor c = color_of(g.state);
        if (restrictiveness(c) > restrictiveness(result)) result = c;
    }
    return result;
}

PhaseTable build_phase_table(const std::vector<SignalSnapshot>& snapshots, const ApproachMapping& mapping,
                             const BuildOptions& options) {
    if (snapshots.size() < 2) {
        throw PhaseError(PhaseErrc::EmptyStream, "need at least two snapshots, got " +
                                                     std::to_string(snapshots.size()));
    }
    const auto max_gap_ms = to_ms(options.max_gap);
    std::vector<ColorPair> colors;
    colors.reserve(snapshots.size());
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (i > 0) {
            const auto gap = snapshots[i].time_ms() - snapshots[i - 1].time_ms();
            if (gap <= 0) {
                throw PhaseError(PhaseErrc::NonMonotonicTime,
                                 "snapshot " + std::to_string(i) + " does not advance time");
            }
            if (gap > max_gap_ms) {
                throw PhaseError(PhaseErrc::GapTooLarge, "gap of " + std::to_string(gap) +
                                                             " ms before snapshot " + std::to_string(i));
            }
        }
        colors.push_back({approach_color(snapshots[i], mapping, Approach::NorthSouth),
                          approach_color(snapshots[i], mapping, Approach::EastWest)});
    }

    // A transition lies between the last sample of one run and the first of the
    // next. When the earlier sample's remaining time lands inside that interval
    // it pins the boundary; otherwise the later sample's time is used.
    std::vector<std::int64_t> bounds{snapshots.front().time_ms()};
    std::vector<ColorPair> runs{colors.front()};
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        if (colors[i] == colors[i - 1]) continue;
        const auto before = snapshots[i - 1].time_ms();
        const auto gap = snapshots[i].time_ms() - before;
        const auto r = min_remaining_ms(snapshots[i - 1], mapping, colors[i].ns != colors[i - 1].ns,
                                        colors[i].ew != colors[i - 1].ew);
        bounds.push_back(r && *r >= 0 && *r <= gap ? before + *r : snapshots[i].time_ms());
        runs.push_back(colors[i]);
    }
    {
        const auto last = snapshots.back().time_ms();
        const auto gap = last - snapshots[snapshots.size() - 2].time_ms();
        const auto r = min_remaining_ms(snapshots.back(), mapping, true, true);
        bounds.push_back(r && *r >= 0 && *r <= gap ? last + *r : last);
    }

    PhaseTable table;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        table.phases.push_back({round_duration(bounds[k + 1] - bounds[k]), runs[k].ns, runs[k].ew});
    }
    table.cycle_boundaries = find_cycle_boundaries(table.phases);
    return table;
}

std::vector<SignalSnapshot> synthesize_stream(const PhaseTable& table, double sample_period,
                                              const ApproachMapping& mapping,
                                              const SynthesisOptions& options) {
    validate(table);
    double shortest = table.phases.front().duration;
    for (const auto& p : table.phases) shortest = std::min(shortest, p.duration);
    const auto period_ms = to_ms(sample_period);
    if (!(sample_period > 0.0) || period_ms <= 0 || sample_period > shortest + 1e-9) {
        throw PhaseError(PhaseErrc::SamplePeriodTooCoarse,
                         "sample period must be in (0, " + format_duration(shortest) + "] s");
    }

    std::vector<std::int64_t> ends;  // cumulative phase end times, ms
    double acc = 0.0;
    for (const auto& p : table.phases) {
        acc += p.duration;
        ends.push_back(to_ms(acc));
    }
    const std::int64_t total = ends.back();

    // Time (ms) at which `approach` next shows a different color, starting in phase k.
    const auto next_change = [&](std::size_t k, Approach approach) {
        const LightColor c = table.phases[k].color(approach);
        std::size_t j = k;
        while (j + 1 < table.phases.size() && table.phases[j + 1].color(approach) == c) ++j;
        return ends[j];
    };

    std::vector<SignalSnapshot> out;
    const std::int64_t base = std::int64_t{options.start_moy} * 60000;
    std::size_t k = 0;
    for (std::int64_t i = 0;; ++i) {
        const std::int64_t t = std::llround(static_cast<double>(i) * sample_period * 1000.0);
        if (t >= total) break;
        while (t >= ends[k]) ++k;
        SignalSnapshot snap;
        snap.intersection_label = options.label;
        snap.intersection_id = options.intersection_id;
        snap.moy = static_cast<std::uint32_t>((base + t) / 60000);
        snap.dsecond = static_cast<std::uint16_t>((base + t) % 60000);
        snap.minute_of_hour = static_cast<int>(snap.moy % 60);
        snap.second_of_minute = snap.dsecond / 1000.0;
        const std::int64_t change_ns = next_change(k, Approach::NorthSouth);
        const std::int64_t change_ew = next_change(k, Approach::EastWest);
        for (const auto& [group, approach] : mapping.groups) {
            GroupState g;
            g.state = representative_state(table.phases[k].color(approach));
            const auto change = approach == Approach::NorthSouth ? change_ns : change_ew;
            g.remaining = static_cast<double>(change - t) / 1000.0;
            snap.groups[group] = g;
        }
        out.push_back(std::move(snap));
    }
    return out;
}

std::string to_phase_csv(const PhaseTable& table) {
    std::ostringstream os;
    os << "phase,duration,north_south,east_west\n";
    const auto idx = phase_indices(table);
    for (std::size_t i = 0; i < table.phases.size(); ++i) {
        const auto& p = table.phases[i];
        os << idx[i] << ',' << format_duration(p.duration) << ',' << to_string(p.ns_color) << ','
           << to_string(p.ew_color) << '\n';
    }
    return os.str();
}

std::string to_phase_json(const PhaseTable& table) {
    ordered_json doc = ordered_json::object();
    ordered_json phases = ordered_json::array();
    const auto idx = phase_indices(table);
    for (std::size_t i = 0; i < table.phases.size(); ++i) {
        const auto& p = table.phases[i];
        ordered_json row = ordered_json::object();
        row["phase"] = idx[i];
        row["duration"] = p.duration;
        row["north_south"] = std::string(to_string(p.ns_color));
        row["east_west"] = std::string(to_string(p.ew_color));
        phases.push_back(std::move(row));
    }
    doc["phases"] = std::move(phases);
    doc["cycle_boundaries"] = table.cycle_boundaries;
    return doc.dump(2) + "\n";
}

PhaseTable parse_phase_table(std::string_view text) {
    PhaseTable table;
    std::vector<int> indices;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) bad_table("empty input");

    if (text[first] == '{') {
        ordered_json doc = ordered_json::parse(text.begin(), text.end(), nullptr, false);
        if (doc.is_discarded()) bad_table("invalid JSON");
        try {
            for (const auto& row : doc.at("phases")) {
                indices.push_back(row.at("phase").get<int>());
                table.phases.push_back({row.at("duration").get<double>(),
                                        parse_color(row.at("north_south").get<std::string>()),
                                        parse_color(row.at("east_west").get<std::string>())});
            }
        } catch (const nlohmann::json::exception& e) {
            bad_table(e.what());
        }
    } else {
        std::istringstream is{std::string(text)};
        std::string line;
        std::getline(is, line);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != "phase,duration,north_south,east_west") bad_table("unexpected header '" + line + "'");
        int row = 1;
        while (std::getline(is, line)) {
            ++row;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::istringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
            if (cells.size() != 4) bad_table("row " + std::to_string(row) + " needs 4 columns");
            try {
                std::size_t used = 0;
                indices.push_back(std::stoi(cells[0]));
                const double duration = std::stod(cells[1], &used);
                if (used != cells[1].size()) throw std::invalid_argument(cells[1]);
                table.phases.push_back({duration, parse_color(cells[2]), parse_color(cells[3])});
            } catch (const std::logic_error&) {
                bad_table("row " + std::to_string(row) + " has a non-numeric field");
            }
        }
    }
    for (std::size_t i = 1; i < indices.size(); ++i) {
        if (indices[i] == 1) table.cycle_boundaries.push_back(i);
    }
    try {
        validate(table);
    } catch (const PhaseError& e) {
        bad_table(e.what());
    }
    return table;
}

}  // namespace spatgen
