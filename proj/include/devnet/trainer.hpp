#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "devnet/dataset.hpp"
#include "devnet/dn.hpp"
#include "devnet/mlp.hpp"
#include "devnet/nn_threshold.hpp"

namespace devnet {

// Scalar hyper-parameters by name; std::map keeps the canonical (sorted)
// serialization stable.
using ParamMap = std::map<std::string, double>;

inline double param_or(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline int param_int(const ParamMap& p, const std::string& key, int fallback) {
    return static_cast<int>(std::llround(param_or(p, key, fallback)));
}

// A trained system: all the grid machinery needs is an error rate on an
// index subset of the dataset.
class Model {
public:
    virtual ~Model() = default;
    virtual double error_on(const Dataset& data, const std::vector<int>& idx) const = 0;
    // Lifetime average error, for trainers that have one.
    virtual std::optional<double> developmental_error() const { return std::nullopt; }
    // Per-epoch fitting curve, for trainers that record one.
    virtual const std::vector<double>* fit_curve() const { return nullptr; }
};

class Trainer {
public:
    virtual ~Trainer() = default;
    virtual std::unique_ptr<Model> fit(const Dataset& data, const std::vector<int>& train_idx,
                                       const ParamMap& arch, std::uint64_t seed) const = 0;
    virtual std::string name() const = 0;
};

namespace detail {
inline LabeledSet subset(const Dataset& data, const std::vector<int>& idx) {
    LabeledSet set;
    set.classes = data.classes;
    set.x.reserve(idx.size());
    set.y.reserve(idx.size());
    for (int i : idx) {
        set.x.push_back(data.x[static_cast<std::size_t>(i)]);
        set.y.push_back(data.y[static_cast<std::size_t>(i)]);
    }
    return set;
}
}  // namespace detail

// ---- error-backprop MLP ----------------------------------------------------

// arch keys: hidden, learning_rate, momentum, epochs (missing keys fall back
// to the trainer's defaults). A diverged cell scores 1.0 everywhere.
class MlpTrainer : public Trainer {
public:
    explicit MlpTrainer(TrainConfig defaults = {}) : defaults_(std::move(defaults)) {}

    std::string name() const override { return "backprop"; }

    std::unique_ptr<Model> fit(const Dataset& data, const std::vector<int>& train_idx,
                               const ParamMap& arch, std::uint64_t seed) const override {
        TrainConfig cfg = defaults_;
        cfg.seed = seed;
        cfg.learning_rate = param_or(arch, "learning_rate", cfg.learning_rate);
        cfg.momentum = param_or(arch, "momentum", cfg.momentum);
        cfg.epochs = param_int(arch, "epochs", cfg.epochs);
        int hidden = param_int(arch, "hidden", cfg.hidden.empty() ? 8 : cfg.hidden[0]);
        cfg.hidden = {std::max(1, hidden)};

        LabeledSet T = detail::subset(data, train_idx);
        Mlp mlp(data.dim(), cfg.hidden, data.classes, cfg.seed);
        TrainResult r = train(std::move(mlp), T, cfg);
        return std::make_unique<MlpModel>(std::move(r));
    }

private:
    struct MlpModel : Model {
        explicit MlpModel(TrainResult r) : result(std::move(r)) {}
        double error_on(const Dataset& data, const std::vector<int>& idx) const override {
            if (result.failed) return 1.0;
            LabeledSet set = detail::subset(data, idx);
            return misclassification(result.model, set);
        }
        const std::vector<double>* fit_curve() const override { return &result.fit_curve; }
        TrainResult result;
    };

    TrainConfig defaults_;
};

// ---- nearest neighbor with confidence threshold ----------------------------

// arch key: threshold. Unknown answers count as errors: the grid measures
// usable accuracy.
class NnThresholdTrainer : public Trainer {
public:
    std::string name() const override { return "nn-threshold"; }

    std::unique_ptr<Model> fit(const Dataset& data, const std::vector<int>& train_idx,
                               const ParamMap& arch, std::uint64_t) const override {
        auto model = std::make_unique<NnModel>();
        for (int i : train_idx) {
            model->clf.samples.push_back(data.x[static_cast<std::size_t>(i)]);
            model->clf.labels.push_back(data.y[static_cast<std::size_t>(i)]);
        }
        model->clf.threshold = param_or(arch, "threshold", 0.0);
        return model;
    }

private:
    struct NnModel : Model {
        double error_on(const Dataset& data, const std::vector<int>& idx) const override {
            if (idx.empty()) throw std::invalid_argument("NnModel: empty evaluation set");
            int wrong = 0;
            for (int i : idx)
                if (predict(clf, data.x[static_cast<std::size_t>(i)]) != data.y[static_cast<std::size_t>(i)])
                    ++wrong;
            return static_cast<double>(wrong) / static_cast<double>(idx.size());
        }
        NnClassifier clf;
    };
};

// ---- developmental network --------------------------------------------------

// Treats each sample as an independent teaching event: the motor context is
// reset to silence, the sample is the sensory input, the label the supervised
// motor. arch keys: capacity, top_k, epochs. The seed only initializes
// virgin weights — with top-1 competition it provably cannot matter.
class DnTrainer : public Trainer {
public:
    struct Defaults {
        int capacity = 0;  // 0 = one neuron per training sample
        int top_k = 1;
        int epochs = 1;
        double spawn_floor = 0.95;
        MatchSchedule schedule;
    };

    DnTrainer() = default;
    explicit DnTrainer(Defaults defaults) : defaults_(defaults) {}

    std::string name() const override { return "dn"; }

    std::unique_ptr<Model> fit(const Dataset& data, const std::vector<int>& train_idx,
                               const ParamMap& arch, std::uint64_t seed) const override {
        DnConfig cfg;
        cfg.x_dim = data.dim();
        cfg.z_dim = data.classes;
        int capacity = param_int(arch, "capacity", defaults_.capacity);
        cfg.y_capacity = capacity > 0 ? capacity : static_cast<int>(train_idx.size());
        cfg.top_k = param_int(arch, "top_k", defaults_.top_k);
        cfg.spawn_floor = defaults_.spawn_floor;
        cfg.schedule = defaults_.schedule;
        cfg.seed = seed;
        int epochs = param_int(arch, "epochs", defaults_.epochs);

        auto model = std::make_unique<DnModel>(DevNetwork(cfg));
        Vec silence(static_cast<std::size_t>(data.classes), 0.0);
        for (int epoch = 0; epoch < epochs; ++epoch) {
            for (int i : train_idx) {
                model->net.clamp_motor(silence);
                Vec label(static_cast<std::size_t>(data.classes), 0.0);
                label[static_cast<std::size_t>(data.y[static_cast<std::size_t>(i)])] = 1.0;
                model->net.step(data.x[static_cast<std::size_t>(i)], label);
            }
        }
        return model;
    }

private:
    struct DnModel : Model {
        explicit DnModel(DevNetwork n) : net(std::move(n)) {}
        // Probes run on fresh copies: evaluation must not disturb the
        // learner and must be order-independent.
        double error_on(const Dataset& data, const std::vector<int>& idx) const override {
            if (idx.empty()) throw std::invalid_argument("DnModel: empty evaluation set");
            Vec silence(static_cast<std::size_t>(data.classes), 0.0);
            int wrong = 0;
            for (int i : idx) {
                DevNetwork probe = net;
                probe.clamp_motor(silence);
                StepResult res = probe.step(data.x[static_cast<std::size_t>(i)]);
                int predicted = zone_winner(res.z_out, 0, data.classes);
                if (predicted != data.y[static_cast<std::size_t>(i)]) ++wrong;
            }
            return static_cast<double>(wrong) / static_cast<double>(idx.size());
        }
        std::optional<double> developmental_error() const override { return net.tracker().mean(); }
        DevNetwork net;
    };

    Defaults defaults_{};
};

}  // namespace devnet
