#include "spatgen/pipeline.hpp"

#include "spatgen/codec.hpp"
#include "spatgen/envelope.hpp"
#include "spatgen/scenario_io.hpp"
#include "spatgen/spat_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace spatgen {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
}

void claim(const fs::path& path, bool force) {
    if (!force && fs::exists(path)) {
        throw IoFailure(path.string() + " exists; pass --force to overwrite");
    }
}

int exit_code_for(const StageReport& r, bool strict) {
    if (strict && r.failed > 0) return 1;
    if (r.failed > 0 && r.succeeded == 0 && r.skipped == 0) return 1;
    return 0;
}

void summary(std::ostream& log, const char* stage, const StageReport& r) {
    log << stage << ": " << r.succeeded << " ok, " << r.skipped << " skipped, " << r.failed << " failed\n";
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

fs::path phase_file_for(const CommandOptions& options, std::uint16_t id, bool several, const char* base) {
    if (!several) return options.out_dir / base;
    const std::string stem = fs::path(base).stem().string();
    const std::string ext = fs::path(base).extension().string();
    return options.out_dir / (stem + "_" + std::to_string(id) + ext);
}

}  // namespace

PipelineConfig load_pipeline_config(const CommandOptions& options) {
    PipelineConfig cfg;
    if (options.config_file) cfg = parse_pipeline_config(read_text_file(*options.config_file));
    if (options.seed) cfg.sim.seed = *options.seed;
    if (options.tz_offset_min) cfg.tz_offset_min = *options.tz_offset_min;
    return cfg;
}

StageReport cmd_decode(const CommandOptions& options, std::ostream& log) {
    const auto lines = read_lines(options.input);
    prepare_out_dir(options.out_dir);
    const fs::path out_path = options.out_dir / kDecodedFile;
    claim(out_path, options.force);

    StageReport report;
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        const std::size_t line_no = i + 1;
        try {
            const RawEnvelope env = parse_envelope(lines[i]);
            const MessageKind kind = classify_payload(env.payload);
            if (kind.kind != FrameKind::Spat) {
                ++report.skipped;
                log << "line " << line_no << ": skipped non-SPaT frame (messageId " << kind.raw_id << ")\n";
                continue;
            }
            out += to_decoded_text(decode_spat(env.payload));
            out += '\n';
            ++report.succeeded;
        } catch (const EnvelopeError& e) {
            ++report.failed;
            log << "line " << line_no << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        } catch (const CodecError& e) {
            ++report.failed;
            log << "line " << line_no << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        }
    }
    write_text_file(out_path, out);
    report.outputs.push_back(out_path);
    report.exit_code = exit_code_for(report, options.strict);
    summary(log, "decode", report);
    return report;
}

StageReport cmd_process(const CommandOptions& options, std::ostream& log) {
    const PipelineConfig cfg = load_pipeline_config(options);
    const auto lines = read_lines(options.input);
    prepare_out_dir(options.out_dir);
    const fs::path out_path = options.out_dir / kSnapshotFile;
    claim(out_path, options.force);

    SnapshotOptions snap_opts{cfg.labels, cfg.tz_offset_min};
    StageReport report;
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        const std::size_t line_no = i + 1;
        try {
            const SpatMessage msg = from_decoded_text(lines[i]);
            bool any = false;
            for (std::size_t k = 0; k < msg.intersections.size(); ++k) {
                if (options.intersection_id && msg.intersections[k].id != *options.intersection_id) continue;
                out += to_snapshot_text(snapshot(msg, k, snap_opts), cfg.tz_offset_min);
                out += '\n';
                any = true;
            }
            any ? ++report.succeeded : ++report.skipped;
        } catch (const SpatStateError& e) {
            ++report.failed;
            log << "line " << line_no << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        } catch (const std::invalid_argument& e) {
            ++report.failed;
            log << "line " << line_no << ": MalformedDecodedRecord: " << e.what() << "\n";
        }
    }
    write_text_file(out_path, out);
    report.outputs.push_back(out_path);
    report.exit_code = exit_code_for(report, options.strict);
    summary(log, "process", report);
    return report;
}

StageReport cmd_phases(const CommandOptions& options, std::ostream& log) {
    const PipelineConfig cfg = load_pipeline_config(options);
    const auto lines = read_lines(options.input);
    prepare_out_dir(options.out_dir);

    StageReport report;
    std::map<std::uint16_t, std::vector<SignalSnapshot>> streams;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        try {
            SignalSnapshot snap = from_snapshot_text(lines[i]);
            if (options.intersection_id && snap.intersection_id != *options.intersection_id) continue;
            streams[snap.intersection_id].push_back(std::move(snap));
        } catch (const SpatStateError& e) {
            ++report.failed;
            log << "line " << i + 1 << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        }
    }
    if (streams.empty()) {
        log << "phases: EmptyStream: no snapshots to structure\n";
        report.exit_code = 1;
        return report;
    }

    const bool several = streams.size() > 1;
    for (const auto& [id, stream] : streams) {
        const fs::path csv_path = phase_file_for(options, id, several, kPhaseCsvFile);
        const fs::path json_path = phase_file_for(options, id, several, kPhaseJsonFile);
        claim(csv_path, options.force);
        claim(json_path, options.force);
        try {
            const PhaseTable table = build_phase_table(stream, cfg.mapping, {cfg.max_gap});
            write_text_file(csv_path, to_phase_csv(table));
            write_text_file(json_path, to_phase_json(table));
            report.outputs.push_back(csv_path);
            report.outputs.push_back(json_path);
            ++report.succeeded;
        } catch (const PhaseError& e) {
            ++report.failed;
            log << "intersection " << id << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
        }
    }
    // Every intersection must structure cleanly.
    report.exit_code = report.failed > 0 ? 1 : 0;
    summary(log, "phases", report);
    return report;
}

StageReport cmd_simulate(const CommandOptions& options, std::ostream& log) {
    PipelineConfig cfg = load_pipeline_config(options);
    cfg.sim.phase_table = parse_phase_table(read_text_file(options.input));
    prepare_out_dir(options.out_dir);
    const fs::path traj_path = options.out_dir / kTrajectoryFile;
    const fs::path manifest_path = options.out_dir / kManifestFile;
    const fs::path bev_dir = options.out_dir / kBevDir;
    claim(traj_path, options.force);
    claim(manifest_path, options.force);
    if (options.bev_every > 0) {
        claim(bev_dir, options.force);
        fs::remove_all(bev_dir);
    }

    const SimulationResult run = run_simulation(cfg.sim);
    export_trajectories(run.records, traj_path);

    RunOutputs outputs;
    outputs.record_count = run.records.size();
    outputs.vehicles_spawned = run.spawned;
    outputs.ticks = run.ticks;
    outputs.duration = run.duration;
    outputs.phase_table_csv = to_phase_csv(cfg.sim.phase_table);

    StageReport report;
    report.outputs = {traj_path, manifest_path};
    if (options.bev_every > 0) {
        prepare_out_dir(bev_dir);
        const GridSpec spec = GridSpec::covering(cfg.sim.geometry, cfg.bev_cell_size);
        std::string index = "frame,tick,time,vehicles,marked,skipped\n";
        // Records are emitted tick by tick; find each tick's slice once.
        std::vector<std::size_t> first(static_cast<std::size_t>(run.ticks) + 1, run.records.size());
        for (std::size_t i = run.records.size(); i-- > 0;) {
            first[static_cast<std::size_t>(std::llround(run.records[i].time / cfg.sim.tick))] = i;
        }
        for (std::size_t k = first.size() - 1; k-- > 0;) first[k] = std::min(first[k], first[k + 1]);
        for (std::int64_t k = 0; k < run.ticks; k += options.bev_every) {
            const auto uk = static_cast<std::size_t>(k);
            const std::span<const TrajectoryRecord> at_tick(run.records.data() + first[uk], first[uk + 1] - first[uk]);
            const OccupancyGrid grid = rasterize_bev(at_tick, spec);
            char name[32];
            std::snprintf(name, sizeof name, "frame_%06lld.pgm", static_cast<long long>(k));
            write_text_file(bev_dir / name, to_pgm(grid));
            char row[160];
            std::snprintf(row, sizeof row, "%s,%lld,%.6f,%zu,%zu,%zu\n", name, static_cast<long long>(k),
                          static_cast<double>(k) * cfg.sim.tick, at_tick.size(), grid.marked(), grid.skipped.size());
            index += row;
            ++outputs.bev_frames;
        }
        write_text_file(bev_dir / "index.csv", index);
        report.outputs.push_back(bev_dir / "index.csv");
    }
    write_manifest(cfg.sim, outputs, manifest_path);

    report.succeeded = 1;
    log << "simulate: " << run.spawned << " vehicles, " << run.records.size() << " trajectory rows, "
        << run.ticks << " ticks\n";
    return report;
}

StageReport cmd_generate(const CommandOptions& options, std::ostream& log) {
    static const std::vector<std::string> stages = {"decode", "process", "phases", "simulate"};
    if (std::find(stages.begin(), stages.end(), options.stop_after) == stages.end()) {
        throw std::invalid_argument("unknown stage '" + options.stop_after + "'");
    }

    StageReport total;
    const auto run_stage = [&](const std::string& name, auto&& fn, CommandOptions stage_opts) {
        try {
            StageReport r = fn(stage_opts, log);
            total.outputs.insert(total.outputs.end(), r.outputs.begin(), r.outputs.end());
            if (r.exit_code != 0) {
                log << "stage " << name << " failed\n";
                total.exit_code = r.exit_code;
                return false;
            }
        } catch (const std::exception& e) {
            log << "stage " << name << ": " << e.what() << "\n";
            total.exit_code = 1;
            return false;
        }
        return options.stop_after != name;
    };

    CommandOptions o = options;
    if (!run_stage("decode", cmd_decode, o)) return total;
    o.input = options.out_dir / kDecodedFile;
    if (!run_stage("process", cmd_process, o)) return total;
    o.input = options.out_dir / kSnapshotFile;
    if (!run_stage("phases", cmd_phases, o)) return total;

    o.input = options.out_dir / kPhaseCsvFile;
    if (!fs::exists(o.input)) {
        log << "stage simulate: several intersections present; pass --intersection-id\n";
        total.exit_code = 1;
        return total;
    }
    run_stage("simulate", cmd_simulate, o);
    return total;
}

}  // namespace spatgen
