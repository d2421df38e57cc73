#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "devnet/postselect.hpp"
#include "devnet/trainer.hpp"

namespace devnet {

// Configuration errors carry the path of the offending field so the CLI
// can print "config error at trainer.type: ...".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& msg)
        : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct DatasetSpec {
    std::string generator;  // gaussian-clusters | noisy-parity | fa-corpus
    std::size_t size = 100;
    nlohmann::json params = nlohmann::json::object();
};

struct TrainerSpec {
    std::string type;  // dn | backprop | nn-threshold
    ParamMap params;   // fixed hyper-parameters merged under every grid point
};

struct GridSpec {
    std::vector<ParamMap> architectures;         // explicit list, or
    std::map<std::string, ScalarRange> scalars;  // three-point construction
    int seeds = 1;

    std::vector<ParamMap> build() const {
        if (!architectures.empty()) return architectures;
        return make_three_point_grid(scalars);
    }
};

struct CompareSpec {
    ParamMap dn;        // dn trainer parameters
    ParamMap backprop;  // backprop trainer parameters
    int epochs = 20;
};

// The Three Learning Conditions block printed verbatim at the top of every
// report: learning-framework restrictions, the training experience, and the
// computational resource bounds.
struct LearningConditions {
    std::string framework;
    std::string experience;
    std::string resources;
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string task = "experiment";
    std::uint64_t master_seed = 1;
    DatasetSpec dataset;
    PartitionFractions partition;
    TrainerSpec trainer;
    GridSpec grid;
    int audit_repeats = 20;
    int crossval_folds = 5;
    std::optional<CompareSpec> compare;
    std::string output = "out";
    LearningConditions conditions;
    bool force_overlap_train_val = false;
    bool force_overlap_train_test = false;
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const std::string& key,
                                           const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + key, "required field is missing");
    return j.at(key);
}

template <typename T>
T get_typed(const nlohmann::json& j, const std::string& path, const char* type_name) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(path, std::string("expected ") + type_name);
    }
}

inline ParamMap param_map_from(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object of scalar parameters");
    ParamMap p;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ConfigError(path + "." + key, "expected a number");
        p[key] = value.get<double>();
    }
    return p;
}

}  // namespace detail

inline const std::vector<std::string>& known_generators() {
    static const std::vector<std::string> g = {"gaussian-clusters", "noisy-parity", "fa-corpus"};
    return g;
}

inline const std::vector<std::string>& known_trainers() {
    static const std::vector<std::string> t = {"dn", "backprop", "nn-threshold"};
    return t;
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::get_typed;
    using detail::param_map_from;
    using detail::require_field;
    if (!j.is_object()) throw ConfigError("(root)", "config must be a JSON object");

    ExperimentConfig cfg;
    cfg.schema_version = get_typed<int>(require_field(j, "schema_version", ""), "schema_version", "an integer");
    if (cfg.schema_version != 1)
        throw ConfigError("schema_version", "unsupported version " + std::to_string(cfg.schema_version));
    if (j.contains("task")) cfg.task = get_typed<std::string>(j.at("task"), "task", "a string");
    if (j.contains("master_seed"))
        cfg.master_seed = get_typed<std::uint64_t>(j.at("master_seed"), "master_seed", "an unsigned integer");

    {
        const auto& d = require_field(j, "dataset", "");
        cfg.dataset.generator =
            get_typed<std::string>(require_field(d, "generator", "dataset."), "dataset.generator", "a string");
        bool known = false;
        for (const auto& g : known_generators()) known |= g == cfg.dataset.generator;
        if (!known) {
            std::string list;
            for (const auto& g : known_generators()) list += (list.empty() ? "" : ", ") + g;
            throw ConfigError("dataset.generator",
                              "unknown generator '" + cfg.dataset.generator + "' (known: " + list + ")");
        }
        if (d.contains("size"))
            cfg.dataset.size = get_typed<std::size_t>(d.at("size"), "dataset.size", "a positive integer");
        if (cfg.dataset.size == 0) throw ConfigError("dataset.size", "must be positive");
        if (d.contains("params")) {
            if (!d.at("params").is_object()) throw ConfigError("dataset.params", "expected an object");
            cfg.dataset.params = d.at("params");
        }
    }

    if (j.contains("partition")) {
        const auto& p = j.at("partition");
        cfg.partition.train = get_typed<double>(require_field(p, "train", "partition."), "partition.train", "a number");
        cfg.partition.val = get_typed<double>(require_field(p, "val", "partition."), "partition.val", "a number");
        cfg.partition.test = get_typed<double>(require_field(p, "test", "partition."), "partition.test", "a number");
    }

    if (j.contains("trainer")) {
        const auto& t = j.at("trainer");
        cfg.trainer.type =
            get_typed<std::string>(require_field(t, "type", "trainer."), "trainer.type", "a string");
        bool known = false;
        for (const auto& name : known_trainers()) known |= name == cfg.trainer.type;
        if (!known) {
            std::string list;
            for (const auto& name : known_trainers()) list += (list.empty() ? "" : ", ") + name;
            throw ConfigError("trainer.type",
                              "unknown trainer '" + cfg.trainer.type + "' (known: " + list + ")");
        }
        if (t.contains("params")) cfg.trainer.params = param_map_from(t.at("params"), "trainer.params");
    }

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.contains("architectures")) {
            const auto& archs = g.at("architectures");
            if (!archs.is_array() || archs.empty())
                throw ConfigError("grid.architectures", "expected a non-empty array");
            int idx = 0;
            for (const auto& a : archs) {
                cfg.grid.architectures.push_back(
                    param_map_from(a, "grid.architectures[" + std::to_string(idx) + "]"));
                ++idx;
            }
        }
        if (g.contains("scalars")) {
            const auto& scalars = g.at("scalars");
            if (!scalars.is_object()) throw ConfigError("grid.scalars", "expected an object");
            for (const auto& [name, range] : scalars.items()) {
                std::string path = "grid.scalars." + name;
                ScalarRange r;
                r.center = get_typed<double>(require_field(range, "center", path + "."), path + ".center", "a number");
                r.sigma = get_typed<double>(require_field(range, "sigma", path + "."), path + ".sigma", "a number");
                cfg.grid.scalars[name] = r;
            }
        }
        if (cfg.grid.architectures.empty() && cfg.grid.scalars.empty())
            throw ConfigError("grid", "needs either 'architectures' or 'scalars'");
        if (g.contains("seeds")) cfg.grid.seeds = get_typed<int>(g.at("seeds"), "grid.seeds", "an integer");
        if (cfg.grid.seeds < 1) throw ConfigError("grid.seeds", "must be >= 1");
    }

    if (j.contains("audit_repeats")) {
        cfg.audit_repeats = get_typed<int>(j.at("audit_repeats"), "audit_repeats", "an integer");
        if (cfg.audit_repeats < 10) throw ConfigError("audit_repeats", "must be >= 10");
    }
    if (j.contains("crossval_folds")) {
        cfg.crossval_folds = get_typed<int>(j.at("crossval_folds"), "crossval_folds", "an integer");
        if (cfg.crossval_folds < 2) throw ConfigError("crossval_folds", "must be >= 2");
    }

    if (j.contains("compare")) {
        const auto& c = j.at("compare");
        CompareSpec spec;
        spec.dn = param_map_from(require_field(c, "dn", "compare."), "compare.dn");
        spec.backprop = param_map_from(require_field(c, "backprop", "compare."), "compare.backprop");
        if (c.contains("epochs")) spec.epochs = get_typed<int>(c.at("epochs"), "compare.epochs", "an integer");
        if (spec.epochs < 1) throw ConfigError("compare.epochs", "must be >= 1");
        cfg.compare = std::move(spec);
    }

    if (j.contains("output")) cfg.output = get_typed<std::string>(j.at("output"), "output", "a string");
    if (j.contains("force_overlap_train_val"))
        cfg.force_overlap_train_val =
            get_typed<bool>(j.at("force_overlap_train_val"), "force_overlap_train_val", "a boolean");
    if (j.contains("force_overlap_train_test"))
        cfg.force_overlap_train_test =
            get_typed<bool>(j.at("force_overlap_train_test"), "force_overlap_train_test", "a boolean");

    // The Three Learning Conditions: explicit strings win; otherwise they
    // are synthesized canonically from the config so every report can print
    // them.
    auto condition_or = [&](const char* key, const std::string& fallback) {
        if (j.contains("conditions") && j.at("conditions").contains(key))
            return get_typed<std::string>(j.at("conditions").at(key),
                                          std::string("conditions.") + key, "a string");
        return fallback;
    };
    {
        std::ostringstream fw, exp, res;
        fw << "trainer=" << (cfg.trainer.type.empty() ? "(none)" : cfg.trainer.type)
           << (cfg.trainer.type == "dn" ? "; incremental, skull-closed" : "")
           << (cfg.trainer.type == "backprop" ? "; batch error-backprop" : "");
        exp << "dataset=" << cfg.dataset.generator << " size=" << cfg.dataset.size
            << " master_seed=" << cfg.master_seed << "; partition T/V/T'=" << cfg.partition.train
            << "/" << cfg.partition.val << "/" << cfg.partition.test;
        std::size_t k = cfg.grid.architectures.empty()
                            ? (cfg.grid.scalars.empty()
                                   ? 1
                                   : static_cast<std::size_t>(std::pow(3.0, static_cast<double>(cfg.grid.scalars.size()))))
                            : cfg.grid.architectures.size();
        res << "grid k=" << k << " architectures x n=" << cfg.grid.seeds << " seeds";
        for (const auto& [key, value] : cfg.trainer.params) res << "; " << key << "=" << value;
        cfg.conditions.framework = condition_or("framework", fw.str());
        cfg.conditions.experience = condition_or("experience", exp.str());
        cfg.conditions.resources = condition_or("resources", res.str());
    }
    return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("(json)", e.what());
    }
    return parse_config(j);
}

}  // namespace devnet
