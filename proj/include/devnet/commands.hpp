#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "devnet/config.hpp"
#include "devnet/dataset.hpp"
#include "devnet/dn_automata.hpp"
#include "devnet/postselect.hpp"
#include "devnet/report.hpp"
#include "devnet/trainer.hpp"

namespace devnet {

// The CLI surface as plain library functions so tests can drive them
// directly. Every artifact they write is a deterministic function of
// (config, master seed); timings are zeroed unless asked for.

struct CommandOptions {
    std::string out_dir;  // overrides config.output when non-empty
    std::optional<std::uint64_t> seed_override;
    int jobs = 1;
    bool timings = false;
    std::ostream* log = &std::cout;
};

namespace detail {

inline std::filesystem::path resolve_out(const ExperimentConfig& cfg, const CommandOptions& opt) {
    std::filesystem::path out = opt.out_dir.empty() ? cfg.output : opt.out_dir;
    std::filesystem::create_directories(out);
    return out;
}

inline std::uint64_t master_seed(const ExperimentConfig& cfg, const CommandOptions& opt) {
    return opt.seed_override ? *opt.seed_override : cfg.master_seed;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

template <typename Fn>
void write_with(const std::filesystem::path& path, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write_file(path, os.str());
}

}  // namespace detail

inline FiniteAutomaton load_fa_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open FA spec: " + path);
    try {
        return parse_fa(is, std::filesystem::path(path).stem().string());
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ":" + std::to_string(e.line()) + ": " + e.what());
    }
}

inline TuringMachine load_tm_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open TM spec: " + path);
    try {
        return parse_tm(is, std::filesystem::path(path).stem().string());
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ":" + std::to_string(e.line()) + ": " + e.what());
    }
}

inline Dataset dataset_from_spec(const DatasetSpec& spec, std::uint64_t seed) {
    const auto& p = spec.params;
    auto num = [&](const char* key, double fallback) {
        return p.contains(key) ? p.at(key).get<double>() : fallback;
    };
    if (spec.generator == "gaussian-clusters") {
        GaussianClustersSpec g;
        g.classes = static_cast<int>(num("classes", 2));
        g.dim = static_cast<int>(num("dim", 2));
        g.size = spec.size;
        g.spread = num("spread", 1.0);
        g.center_radius = num("center_radius", 3.0);
        g.label_noise = num("label_noise", 0.0);
        return make_gaussian_clusters(g, seed);
    }
    if (spec.generator == "noisy-parity") {
        NoisyParitySpec g;
        g.dim = static_cast<int>(num("dim", 4));
        g.size = spec.size;
        g.flip_prob = num("flip_prob", 0.0);
        return make_noisy_parity(g, seed);
    }
    if (spec.generator == "fa-corpus") {
        if (!p.contains("fa_file"))
            throw ConfigError("dataset.params.fa_file", "fa-corpus needs an FA spec path");
        FiniteAutomaton fa = load_fa_file(p.at("fa_file").get<std::string>());
        FaCorpusSpec g;
        g.length = static_cast<std::size_t>(num("length", 5));
        g.sequences = p.contains("sequences")
                          ? static_cast<std::size_t>(num("sequences", 20))
                          : (spec.size + g.length - 1) / g.length;
        return make_fa_corpus(fa, g, seed);
    }
    throw ConfigError("dataset.generator", "unknown generator '" + spec.generator + "'");
}

inline std::unique_ptr<Trainer> make_trainer(const TrainerSpec& spec) {
    if (spec.type == "backprop" || spec.type.empty()) {
        TrainConfig defaults;
        defaults.learning_rate = param_or(spec.params, "learning_rate", defaults.learning_rate);
        defaults.momentum = param_or(spec.params, "momentum", defaults.momentum);
        defaults.epochs = param_int(spec.params, "epochs", defaults.epochs);
        defaults.hidden = {param_int(spec.params, "hidden", 8)};
        return std::make_unique<MlpTrainer>(defaults);
    }
    if (spec.type == "nn-threshold") return std::make_unique<NnThresholdTrainer>();
    if (spec.type == "dn") {
        DnTrainer::Defaults d;
        d.capacity = param_int(spec.params, "capacity", 0);
        d.top_k = param_int(spec.params, "top_k", 1);
        d.epochs = param_int(spec.params, "epochs", 1);
        d.spawn_floor = param_or(spec.params, "spawn_floor", 0.95);
        d.schedule.delta = param_or(spec.params, "delta", 1e-6);
        d.schedule.childhood_length = param_or(spec.params, "t1", 1000.0);
        return std::make_unique<DnTrainer>(d);
    }
    throw ConfigError("trainer.type", "unknown trainer '" + spec.type + "'");
}

// Fixed trainer params merged under every grid point (grid wins on clashes).
inline std::vector<ParamMap> merged_architectures(const ExperimentConfig& cfg) {
    std::vector<ParamMap> archs = cfg.grid.build();
    for (ParamMap& a : archs)
        for (const auto& [key, value] : cfg.trainer.params)
            if (!a.count(key)) a[key] = value;
    return archs;
}

// ---- gen-data ---------------------------------------------------------------

inline int cmd_gen_data(const ExperimentConfig& cfg, const CommandOptions& opt) {
    auto out = detail::resolve_out(cfg, opt);
    std::uint64_t seed = detail::master_seed(cfg, opt);
    Dataset d = dataset_from_spec(cfg.dataset, derive_seed(seed, "dataset"));
    detail::write_with(out / "dataset.csv", [&](std::ostream& os) { write_dataset_csv(os, d); });
    nlohmann::json meta;
    meta["generator"] = cfg.dataset.generator;
    meta["size"] = d.size();
    meta["dim"] = d.dim();
    meta["classes"] = d.classes;
    meta["master_seed"] = seed;
    meta["params"] = cfg.dataset.params;
    detail::write_file(out / "dataset_meta.json", meta.dump(2) + "\n");
    *opt.log << "wrote " << (out / "dataset.csv").string() << " (" << d.size() << " samples)\n";
    return 0;
}

// ---- audit ------------------------------------------------------------------

inline int cmd_audit(const ExperimentConfig& cfg, const CommandOptions& opt) {
    auto out = detail::resolve_out(cfg, opt);
    std::uint64_t seed = detail::master_seed(cfg, opt);

    Dataset data = dataset_from_spec(cfg.dataset, derive_seed(seed, "dataset"));
    Partition part = partition_dataset(data.size(), cfg.partition, seed);
    {
        // Partition soundness holds on every run before any forced overlap.
        PartitionCheck sound = check_partition(part, data.size());
        if (sound.train_val_overlap || sound.train_test_overlap || !sound.covers)
            throw std::logic_error("partition soundness violated");
    }
    std::vector<std::string> banners;
    if (cfg.force_overlap_train_val) part.val = part.train;
    if (cfg.force_overlap_train_test) part.test = part.train;
    PartitionCheck check = check_partition(part, data.size());
    if (check.train_val_overlap)
        banners.push_back("VALIDATION-VANISHED: training and validation sets overlap");
    if (check.train_test_overlap)
        banners.push_back("TEST-VANISHED: training and test sets overlap");

    std::unique_ptr<Trainer> trainer = make_trainer(cfg.trainer);
    HyperGrid grid;
    if (cfg.trainer.type == "nn-threshold" && cfg.grid.architectures.empty() &&
        cfg.grid.scalars.empty()) {
        // No explicit grid: estimate the confidence threshold's three-point
        // grid from the mean and deviation of nearest V-to-T distances.
        std::vector<Vec> T, V;
        for (int i : part.train) T.push_back(data.x[static_cast<std::size_t>(i)]);
        for (int i : part.val) V.push_back(data.x[static_cast<std::size_t>(i)]);
        for (double d : estimate_threshold_grid(T, V))
            grid.architectures.push_back({{"threshold", d}});
    } else {
        grid.architectures = merged_architectures(cfg);
    }
    grid.seeds = derive_grid_seeds(seed, cfg.grid.seeds);
    ErrorTable table = run_grid(*trainer, grid, data, part, opt.jobs);

    std::optional<AuditResult> audit;
    if (!part.audit.empty())
        audit = luckiest_generalization_audit(*trainer, grid.architectures, cfg.grid.seeds, data,
                                              part, seed, cfg.audit_repeats, opt.jobs);

    detail::write_with(out / "error_table.csv",
                       [&](std::ostream& os) { write_error_table_csv(os, table, opt.timings); });
    std::ostringstream note;
    note << "|T|=" << part.train.size() << " |V|=" << part.val.size()
         << " |T'|=" << part.test.size() << " |T''|=" << part.audit.size();
    ReportInputs inputs{&cfg, &table, banners, audit, note.str()};
    detail::write_with(out / "report.txt", [&](std::ostream& os) { write_report_txt(os, inputs); });
    detail::write_with(out / "report.csv", [&](std::ostream& os) { write_report_csv(os, table); });
    if (audit) {
        detail::write_with(out / "audit_repeats.csv", [&](std::ostream& os) {
            os << "repeat,psuvs_i,psuvs_j,psuvs_val_err,psuvs_audit_err,psuvs_diff,"
                  "psuts_i,psuts_j,psuts_test_err,psuts_audit_err,psuts_diff,grid_mean_val\n";
            char buf[64];
            auto num = [&](double v) {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                return std::string(buf);
            };
            for (const AuditRepeatRow& r : audit->rows) {
                os << r.repeat << ',' << r.psuvs.seed_index << ',' << r.psuvs.arch_index << ','
                   << num(r.psuvs.error) << ',' << num(r.psuvs_audit_error) << ','
                   << num(r.psuvs_audit_error - r.psuvs.error) << ',' << r.psuts.seed_index << ','
                   << r.psuts.arch_index << ',' << num(r.psuts.error) << ','
                   << num(r.psuts_audit_error) << ',' << num(r.psuts_audit_error - r.psuts.error)
                   << ',' << num(r.grid_mean_val) << '\n';
            }
        });
    }
    *opt.log << "audit complete: " << (out / "report.txt").string() << "\n";
    return 0;
}

// ---- crossval ----------------------------------------------------------------

inline int cmd_crossval(const ExperimentConfig& cfg, const CommandOptions& opt) {
    auto out = detail::resolve_out(cfg, opt);
    std::uint64_t seed = detail::master_seed(cfg, opt);
    Dataset data = dataset_from_spec(cfg.dataset, derive_seed(seed, "dataset"));
    std::unique_ptr<Trainer> trainer = make_trainer(cfg.trainer);
    CrossValResult r =
        k_fold_cross_validate(data, cfg.crossval_folds, *trainer, cfg.trainer.params, seed);
    detail::write_with(out / "crossval.csv", [&](std::ostream& os) {
        os << "fold,error\n";
        char buf[64];
        for (std::size_t f = 0; f < r.fold_errors.size(); ++f) {
            std::snprintf(buf, sizeof buf, "%.17g", r.fold_errors[f]);
            os << f << ',' << buf << '\n';
        }
    });
    detail::write_with(out / "crossval_report.txt", [&](std::ostream& os) {
        os << "n-fold cross-validation (n=" << cfg.crossval_folds << ", trainer=" << trainer->name()
           << ")\n";
        os << "THREE LEARNING CONDITIONS\n";
        os << "  framework:  " << cfg.conditions.framework << "\n";
        os << "  experience: " << cfg.conditions.experience << "\n";
        os << "  resources:  " << cfg.conditions.resources << "\n";
        os << "cross-validated error (mean over folds): " << r.mean_error << "\n";
        os << "fold error distribution: min=" << r.distribution.min << " q25=" << r.distribution.q25
           << " median=" << r.distribution.median << " q75=" << r.distribution.q75
           << " max=" << r.distribution.max << " std=" << r.distribution.std << "\n";
    });
    *opt.log << "crossval mean error " << r.mean_error << " (std " << r.distribution.std << ")\n";
    return 0;
}

// ---- teach-fa -----------------------------------------------------------------

struct TeachFaParams {
    int capacity = 0;  // 0 = 2 * transition count
    int epochs = 2;
    std::uint64_t seed = 0;
};

inline int cmd_teach_fa(const std::string& fa_path, const TeachFaParams& params,
                        const std::filesystem::path& out_dir, std::ostream& log = std::cout) {
    std::filesystem::create_directories(out_dir);
    FiniteAutomaton fa = load_fa_file(fa_path);
    OneHotCodec codec = OneHotCodec::for_fa(fa);
    int transitions = fa.num_states() * fa.num_symbols();
    int capacity = params.capacity > 0 ? params.capacity : 2 * transitions;
    DevNetwork net(dn_config_for_codec(codec, capacity, params.seed));
    TeachLog teach = teach_fa(net, fa, codec, params.epochs);
    EquivalenceReport equiv = verify_fa_equivalence(net, fa, codec);

    detail::write_with(out_dir / "lifetime.csv",
                       [&](std::ostream& os) { net.write_lifetime_csv(os); });
    detail::write_with(out_dir / "equivalence_report.txt", [&](std::ostream& os) {
        os << "machine: " << fa.name << " (" << fa.num_states() << " states, "
           << fa.num_symbols() << " symbols, " << transitions << " transitions)\n";
        os << "capacity: " << capacity << "  epochs: " << params.epochs << "\n";
        if (teach.capacity_warning)
            os << "!!! WARNING: capacity below transition count; the error-free guarantee is void !!!\n";
        os << "per-epoch developmental error:";
        for (double e : teach.epoch_errors) os << ' ' << e;
        os << "\nequivalence: " << equiv.mismatches.size() << " mismatches out of " << equiv.total
           << " transitions\n";
        for (auto [q, s] : equiv.mismatches)
            os << "  mismatch at (" << fa.states[static_cast<std::size_t>(q)] << ", "
               << fa.alphabet[static_cast<std::size_t>(s)] << ")\n";
    });
    detail::write_with(out_dir / "network.snapshot", [&](std::ostream& os) { net.save(os); });
    log << "taught " << fa.name << ": " << equiv.mismatches.size() << " mismatches, epoch errors:";
    for (double e : teach.epoch_errors) log << ' ' << e;
    log << "\n";
    return 0;
}

// ---- run-tm -------------------------------------------------------------------

struct RunTmParams {
    std::string tape;  // symbol tokens separated by spaces, or contiguous single chars
    long budget = 10000;
    int epochs = 2;
    std::uint64_t seed = 0;
    bool via_dn = true;
};

inline std::vector<int> parse_tape(const TuringMachine& tm, const std::string& text) {
    std::vector<int> tape;
    std::istringstream ss(text);
    std::string tok;
    std::vector<std::string> toks;
    while (ss >> tok) toks.push_back(tok);
    if (toks.size() <= 1 && !toks.empty() && !tm.symbol_index(toks[0])) {
        // single run of one-character symbols, e.g. "111"
        for (char c : toks[0]) {
            auto idx = tm.symbol_index(std::string(1, c));
            if (!idx) throw std::runtime_error("tape symbol '" + std::string(1, c) + "' not in tape alphabet");
            tape.push_back(*idx);
        }
        return tape;
    }
    for (const std::string& t : toks) {
        auto idx = tm.symbol_index(t);
        if (!idx) throw std::runtime_error("tape symbol '" + t + "' not in tape alphabet");
        tape.push_back(*idx);
    }
    return tape;
}

inline std::string render_tape(const TuringMachine& tm, const std::vector<int>& tape) {
    std::string out;
    for (int sym : tape) {
        if (!out.empty()) out += ' ';
        out += tm.tape_alphabet[static_cast<std::size_t>(sym)];
    }
    return out.empty() ? "(blank)" : out;
}

inline int cmd_run_tm(const std::string& tm_path, const RunTmParams& params,
                      std::ostream& log = std::cout) {
    TuringMachine tm = load_tm_file(tm_path);
    std::vector<int> input = parse_tape(tm, params.tape);
    TmRun symbolic = run_tm(tm, input, params.budget);
    log << "symbolic: tape=[" << render_tape(tm, symbolic.tape) << "] halted="
        << (symbolic.halted ? "yes" : "no") << " steps=" << symbolic.steps << "\n";
    if (params.via_dn) {
        OneHotCodec codec = OneHotCodec::for_tm(tm);
        DevNetwork net(
            dn_config_for_codec(codec, 2 * tm.num_states() * tm.num_symbols(), params.seed));
        teach_tm_control(net, tm, codec, params.epochs);
        DnTmRun driven = run_tm_via_dn(net, tm, codec, input, params.budget);
        log << "dn-driven: tape=[" << render_tape(tm, driven.tape) << "] halted="
            << (driven.halted ? "yes" : "no") << " steps=" << driven.steps << "\n";
        if (!driven.undecodable_steps.empty())
            log << "dn-driven: undecodable motor output at step " << driven.undecodable_steps[0]
                << " (untaught transition)\n";
        log << "tapes " << (driven.tape == symbolic.tape && driven.halted == symbolic.halted
                                ? "MATCH"
                                : "DIFFER")
            << "\n";
    }
    return 0;
}

// ---- compare -------------------------------------------------------------------

// Per-epoch resubstitution error curves: the single incremental DN against
// the PSUVS-luckiest backprop network from the grid, aligned for plotting.
inline int cmd_compare(const ExperimentConfig& cfg, const CommandOptions& opt) {
    if (!cfg.compare) throw ConfigError("compare", "config has no compare block");
    auto out = detail::resolve_out(cfg, opt);
    std::uint64_t seed = detail::master_seed(cfg, opt);
    Dataset data = dataset_from_spec(cfg.dataset, derive_seed(seed, "dataset"));
    Partition part = partition_dataset(data.size(), cfg.partition, seed);
    int epochs = cfg.compare->epochs;

    // DN: one network, trained incrementally; resubstitution error after
    // each epoch.
    std::vector<double> dn_curve;
    {
        DnTrainer::Defaults d;
        d.capacity = param_int(cfg.compare->dn, "capacity", 0);
        d.top_k = param_int(cfg.compare->dn, "top_k", 1);
        d.epochs = 1;
        DnTrainer trainer(d);
        ParamMap arch = cfg.compare->dn;
        arch["epochs"] = 1;  // teach epoch by epoch, measuring after each
        // Build incrementally by refitting e cumulative epochs; the DN is
        // deterministic so refitting epoch counts is equivalent to pausing.
        for (int e = 1; e <= epochs; ++e) {
            arch["epochs"] = static_cast<double>(e);
            auto model = trainer.fit(data, part.train, arch, derive_seed(seed, "compare-dn"));
            dn_curve.push_back(model->error_on(data, part.train));
        }
    }

    // Backprop: run the grid, pick the PSUVS-luckiest network, report its
    // per-epoch fitting curve.
    std::vector<double> bp_curve;
    {
        TrainerSpec spec;
        spec.type = "backprop";
        spec.params = cfg.compare->backprop;
        spec.params["epochs"] = static_cast<double>(epochs);
        std::unique_ptr<Trainer> trainer = make_trainer(spec);
        HyperGrid grid;
        grid.architectures = merged_architectures(cfg);
        for (ParamMap& a : grid.architectures) a["epochs"] = static_cast<double>(epochs);
        grid.seeds = derive_grid_seeds(seed, cfg.grid.seeds);
        ErrorTable table = run_grid(*trainer, grid, data, part, opt.jobs);
        Selection luckiest = psuvs_select(table);
        auto model = trainer->fit(data, part.train,
                                  grid.architectures[static_cast<std::size_t>(luckiest.arch_index)],
                                  grid.seeds[static_cast<std::size_t>(luckiest.seed_index)]);
        const std::vector<double>* curve = model->fit_curve();
        if (!curve) throw std::logic_error("backprop model lost its fitting curve");
        for (int e = 1; e <= epochs; ++e) bp_curve.push_back((*curve)[static_cast<std::size_t>(e)]);
    }

    detail::write_with(out / "compare.csv", [&](std::ostream& os) {
        os << "epoch,system,fit_err\n";
        char buf[64];
        auto num = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        for (int e = 0; e < epochs; ++e)
            os << (e + 1) << ",dn," << num(dn_curve[static_cast<std::size_t>(e)]) << '\n';
        for (int e = 0; e < epochs; ++e)
            os << (e + 1) << ",backprop-luckiest," << num(bp_curve[static_cast<std::size_t>(e)])
               << '\n';
    });
    *opt.log << "compare curves written: dn final " << dn_curve.back() << ", backprop final "
             << bp_curve.back() << "\n";
    return 0;
}

// ---- report (re-summarize an existing table) -------------------------------------

inline int cmd_report(const ExperimentConfig& cfg, const CommandOptions& opt) {
    auto out = detail::resolve_out(cfg, opt);
    std::ifstream is(out / "error_table.csv");
    if (!is) throw std::runtime_error("no error_table.csv in " + out.string());
    ErrorTable table = read_error_table_csv(is);
    ReportInputs inputs{&cfg, &table, {}, std::nullopt, ""};
    detail::write_with(out / "report.txt", [&](std::ostream& os) { write_report_txt(os, inputs); });
    detail::write_with(out / "report.csv", [&](std::ostream& os) { write_report_csv(os, table); });
    *opt.log << "report regenerated from " << (out / "error_table.csv").string() << "\n";
    return 0;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace devnet
