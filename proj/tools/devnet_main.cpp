// devnet — developmental-network lab and post-selection audit harness.
//
// Subcommands: gen-data, audit, crossval, teach-fa, run-tm, compare, report.
// All randomness flows from one master seed (--seed overrides the config);
// artifact files are byte-reproducible from (config, seed).

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "devnet/commands.hpp"

using namespace devnet;

int main(int argc, char** argv) {
    CLI::App app{"developmental-network lab and post-selection audit harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    bool timings = false;

    auto add_common = [&](CLI::App* cmd, bool config_required = true) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")
            ->required(config_required);
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "master seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--jobs", jobs, "parallel grid cells")->check(CLI::PositiveNumber);
        cmd->add_flag("--timings", timings, "record real wall times in the error table CSV");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
    add_common(gen);

    CLI::App* audit = app.add_subcommand(
        "audit", "partition, train the grid, run every selector and the generalization audit");
    add_common(audit);

    CLI::App* crossval = app.add_subcommand("crossval", "n-fold cross-validation");
    add_common(crossval);

    CLI::App* report = app.add_subcommand("report", "re-summarize an existing error table");
    add_common(report);

    CLI::App* compare = app.add_subcommand(
        "compare", "per-epoch curves: one DN vs the PSUVS-luckiest backprop network");
    add_common(compare);

    std::string machine_path, tape;
    long budget = 10000;
    int capacity = 0, epochs = 2;

    CLI::App* teach = app.add_subcommand("teach-fa", "teach a DN an FA spec and verify it");
    teach->add_option("spec", machine_path, "FA spec file")->required();
    teach->add_option("--out", out_dir, "output directory")->default_val("out");
    teach->add_option("--capacity", capacity, "hidden capacity (default 2x transitions)");
    teach->add_option("--epochs", epochs, "teaching epochs");
    teach->add_option("--seed", seed, "virgin-weight seed");

    CLI::App* runtm = app.add_subcommand("run-tm", "run a TM symbolically and via a taught DN");
    runtm->add_option("spec", machine_path, "TM spec file")->required();
    runtm->add_option("--tape", tape, "input tape (tokens or contiguous single chars)")
        ->default_val("");
    runtm->add_option("--budget", budget, "step budget")->check(CLI::PositiveNumber);
    runtm->add_option("--epochs", epochs, "control teaching epochs");
    runtm->add_option("--seed", seed, "virgin-weight seed");
    runtm->add_flag("--symbolic-only", "skip the DN-driven run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (teach->parsed()) {
            TeachFaParams params;
            params.capacity = capacity;
            params.epochs = epochs;
            params.seed = seed;
            return cmd_teach_fa(machine_path, params, out_dir.empty() ? "out" : out_dir);
        }
        if (runtm->parsed()) {
            RunTmParams params;
            params.tape = tape;
            params.budget = budget;
            params.epochs = epochs;
            params.seed = seed;
            params.via_dn = runtm->count("--symbolic-only") == 0;
            return cmd_run_tm(machine_path, params);
        }

        ExperimentConfig cfg = load_config_file(config_path);
        CommandOptions opt;
        opt.out_dir = out_dir;
        if (seed_set) opt.seed_override = seed;
        opt.jobs = jobs;
        opt.timings = timings;

        if (gen->parsed()) return cmd_gen_data(cfg, opt);
        if (audit->parsed()) return cmd_audit(cfg, opt);
        if (crossval->parsed()) return cmd_crossval(cfg, opt);
        if (compare->parsed()) return cmd_compare(cfg, opt);
        if (report->parsed()) return cmd_report(cfg, opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
