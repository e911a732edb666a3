#include "spatgen/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace spatgen;

namespace {

void add_common(CLI::App* cmd, CommandOptions& o, bool needs_input = true) {
    auto* in = cmd->add_option("--input,-i", o.input, "input file");
    if (needs_input) in->required();
    cmd->add_option("--out-dir,-o", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--config,-c", o.config_file, "JSON configuration file");
    cmd->add_flag("--force", o.force, "overwrite existing outputs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPaT log decoding, phase structuring and traffic simulation"};
    app.set_version_flag("--version", "spatgen 0.1.0");
    app.require_subcommand(1);

    CommandOptions o;

    auto* decode = app.add_subcommand("decode", "envelope log -> decoded.ndjson");
    add_common(decode, o);
    decode->add_flag("--strict", o.strict, "fail on the first bad record");

    auto* process = app.add_subcommand("process", "decoded.ndjson -> snapshots.ndjson");
    add_common(process, o);
    process->add_flag("--strict", o.strict, "fail on any bad record");
    process->add_option("--intersection-id", o.intersection_id, "keep only this intersection");
    process->add_option("--tz-offset-min", o.tz_offset_min, "minutes added to the displayed hour");

    auto* phases = app.add_subcommand("phases", "snapshots.ndjson -> phases.csv / phases.json");
    add_common(phases, o);
    phases->add_option("--intersection-id", o.intersection_id, "keep only this intersection");

    auto* simulate = app.add_subcommand("simulate", "phase table -> trajectories.csv, manifest.json");
    add_common(simulate, o);
    simulate->add_option("--seed", o.seed, "RNG seed");
    simulate->add_option("--bev-every", o.bev_every, "write an occupancy frame every N ticks")
        ->check(CLI::NonNegativeNumber);

    auto* generate = app.add_subcommand("generate", "run every stage from an envelope log");
    add_common(generate, o);
    generate->add_flag("--strict", o.strict, "fail on any bad record");
    generate->add_option("--intersection-id", o.intersection_id, "keep only this intersection");
    generate->add_option("--tz-offset-min", o.tz_offset_min, "minutes added to the displayed hour");
    generate->add_option("--seed", o.seed, "RNG seed");
    generate->add_option("--bev-every", o.bev_every, "write an occupancy frame every N ticks")
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--stop-after", o.stop_after, "last stage to run")
        ->check(CLI::IsMember({"decode", "process", "phases", "simulate"}));

    CLI11_PARSE(app, argc, argv);

    try {
        StageReport r;
        if (*decode) r = cmd_decode(o, std::cerr);
        else if (*process) r = cmd_process(o, std::cerr);
        else if (*phases) r = cmd_phases(o, std::cerr);
        else if (*simulate) r = cmd_simulate(o, std::cerr);
        else r = cmd_generate(o, std::cerr);
        for (const auto& p : r.outputs) std::cout << p.string() << "\n";
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
