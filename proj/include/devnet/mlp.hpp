#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "devnet/rng.hpp"
#include "devnet/vecmath.hpp"

namespace devnet {

// Minimal logistic multilayer perceptron trained by full-batch error
// backpropagation on the sum of squared errors. Deliberately plain: no
// competition, no gating, every weight updates from its gradient whether
// or not its neuron had anything to do with the current error. This is
// the object whose seed and hyper-parameter luck the audit measures.

struct TrainConfig {
    double learning_rate = 0.5;
    double momentum = 0.0;  // in [0, 1)
    int epochs = 50;
    std::uint64_t seed = 0;
    std::vector<int> hidden = {8};
    double fire_threshold = 0.5;
};

struct LabeledSample {
    Vec x;
    Vec target;
};

class MlpDivergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double logistic(double y) { return 1.0 / (1.0 + std::exp(-y)); }

class Mlp {
public:
    // Weights initialized uniform in [-0.5, 0.5] scaled by 1/sqrt(fan-in),
    // entirely determined by the seed. Bias handled as a constant-1 input.
    Mlp(int input_dim, const std::vector<int>& hidden, int output_dim, std::uint64_t seed) {
        if (input_dim < 1 || output_dim < 1)
            throw std::invalid_argument("Mlp: dimensions must be positive");
        sizes_.push_back(input_dim);
        for (int h : hidden) {
            if (h < 1) throw std::invalid_argument("Mlp: hidden sizes must be positive");
            sizes_.push_back(h);
        }
        sizes_.push_back(output_dim);
        Rng rng(derive_seed(seed, "mlp-init"));
        for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
            int fan_in = sizes_[l];
            double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
            std::vector<Vec> layer(static_cast<std::size_t>(sizes_[l + 1]),
                                   Vec(static_cast<std::size_t>(fan_in + 1), 0.0));
            for (auto& row : layer)
                for (double& w : row) w = rng.uniform(-0.5, 0.5) * scale;
            weights_.push_back(std::move(layer));
            velocity_.emplace_back(static_cast<std::size_t>(sizes_[l + 1]),
                                   Vec(static_cast<std::size_t>(fan_in + 1), 0.0));
        }
    }

    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    int num_layers() const { return static_cast<int>(weights_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }

    std::vector<std::vector<Vec>>& weights() { return weights_; }
    const std::vector<std::vector<Vec>>& weights() const { return weights_; }

    // Activations of every non-input layer; .back() is the output.
    std::vector<Vec> forward_trace(const Vec& x) const {
        if (static_cast<int>(x.size()) != sizes_.front())
            throw std::invalid_argument("Mlp::forward: dimension mismatch");
        std::vector<Vec> trace;
        const Vec* in = &x;
        for (const auto& layer : weights_) {
            Vec out(layer.size());
            for (std::size_t j = 0; j < layer.size(); ++j) {
                const Vec& row = layer[j];
                double s = row.back();  // bias
                for (std::size_t i = 0; i < in->size(); ++i) s += row[i] * (*in)[i];
                out[j] = logistic(s);
            }
            trace.push_back(std::move(out));
            in = &trace.back();
        }
        return trace;
    }

    Vec forward(const Vec& x) const { return forward_trace(x).back(); }

private:
    std::vector<int> sizes_;
    std::vector<std::vector<Vec>> weights_;   // [layer][out_unit][in_unit or bias]
    std::vector<std::vector<Vec>> velocity_;  // momentum buffers, same shape

    friend Mlp backprop_update(Mlp mlp, const std::vector<LabeledSample>& batch,
                               const TrainConfig& config);
};

// One full-batch gradient step on the squared error, with momentum:
//     dw = -lr * grad + momentum * dw_prev.
// Throws MlpDivergence when the gradient turns non-finite.
inline Mlp backprop_update(Mlp mlp, const std::vector<LabeledSample>& batch,
                           const TrainConfig& config) {
    if (batch.empty()) throw std::invalid_argument("backprop_update: empty batch");
    std::size_t layers = mlp.weights_.size();
    std::vector<std::vector<Vec>> grad(layers);
    for (std::size_t l = 0; l < layers; ++l)
        grad[l].assign(mlp.weights_[l].size(), Vec(mlp.weights_[l][0].size(), 0.0));

    for (const LabeledSample& sample : batch) {
        if (sample.target.size() != static_cast<std::size_t>(mlp.output_dim()))
            throw std::invalid_argument("backprop_update: target dimension mismatch");
        std::vector<Vec> acts = mlp.forward_trace(sample.x);

        // delta via the chain rule; eta = z(1-z) is the logistic derivative.
        std::vector<Vec> delta(layers);
        const Vec& out = acts.back();
        delta[layers - 1].resize(out.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            double eta = out[j] * (1.0 - out[j]);
            delta[layers - 1][j] = 2.0 * (out[j] - sample.target[j]) * eta;
        }
        for (std::size_t l = layers - 1; l-- > 0;) {
            const Vec& z = acts[l];
            delta[l].assign(z.size(), 0.0);
            for (std::size_t i = 0; i < z.size(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < delta[l + 1].size(); ++j)
                    s += mlp.weights_[l + 1][j][i] * delta[l + 1][j];
                delta[l][i] = s * z[i] * (1.0 - z[i]);
            }
        }
        for (std::size_t l = 0; l < layers; ++l) {
            const Vec& in = (l == 0) ? sample.x : acts[l - 1];
            for (std::size_t j = 0; j < grad[l].size(); ++j) {
                Vec& g = grad[l][j];
                double d = delta[l][j];
                for (std::size_t i = 0; i < in.size(); ++i) g[i] += d * in[i];
                g.back() += d;  // bias input is 1
            }
        }
    }

    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t j = 0; j < grad[l].size(); ++j) {
            for (std::size_t i = 0; i < grad[l][j].size(); ++i) {
                double g = grad[l][j][i];
                if (!std::isfinite(g)) throw MlpDivergence("backprop_update: non-finite gradient");
                double dw = -config.learning_rate * g + config.momentum * mlp.velocity_[l][j][i];
                mlp.velocity_[l][j][i] = dw;
                mlp.weights_[l][j][i] += dw;
            }
        }
    }
    return mlp;
}

struct LabeledSet {
    std::vector<Vec> x;
    std::vector<int> y;
    int classes = 0;
};

inline int classify(const Mlp& mlp, const Vec& x) {
    Vec out = mlp.forward(x);
    int best = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] > out[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    return best;
}

inline double misclassification(const Mlp& mlp, const LabeledSet& set) {
    if (set.x.empty()) throw std::invalid_argument("misclassification: empty set");
    int wrong = 0;
    for (std::size_t i = 0; i < set.x.size(); ++i)
        if (classify(mlp, set.x[i]) != set.y[i]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(set.x.size());
}

struct TrainResult {
    Mlp model;
    // fit_curve[i] = misclassification on T after i epochs (entry 0 is the
    // untrained network).
    std::vector<double> fit_curve;
    bool failed = false;
};

inline std::vector<LabeledSample> to_batch(const LabeledSet& set) {
    std::vector<LabeledSample> batch;
    batch.reserve(set.x.size());
    for (std::size_t i = 0; i < set.x.size(); ++i) {
        Vec target(static_cast<std::size_t>(set.classes), 0.0);
        target[static_cast<std::size_t>(set.y[i])] = 1.0;
        batch.push_back({set.x[i], std::move(target)});
    }
    return batch;
}

// Deterministic given (config.seed, T). A diverged run is not a crash: it
// is recorded as failed with error 1.0 — failed runs are data for the audit.
inline TrainResult train(Mlp mlp, const LabeledSet& T, const TrainConfig& config) {
    if (T.x.empty()) throw std::invalid_argument("train: empty training set");
    std::vector<LabeledSample> batch = to_batch(T);
    TrainResult result{std::move(mlp), {}, false};
    result.fit_curve.push_back(misclassification(result.model, T));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        try {
            result.model = backprop_update(std::move(result.model), batch, config);
        } catch (const MlpDivergence&) {
            result.failed = true;
            result.fit_curve.resize(static_cast<std::size_t>(config.epochs) + 1, 1.0);
            return result;
        }
        result.fit_curve.push_back(misclassification(result.model, T));
    }
    return result;
}

// Per hidden layer: fraction of neurons with activation <= fire_threshold,
// averaged over X (the "percentage luck" statistic).
inline std::vector<double> firing_fraction(const Mlp& mlp, const std::vector<Vec>& X,
                                           double fire_threshold) {
    if (X.empty()) throw std::invalid_argument("firing_fraction: empty input set");
    std::size_t hidden_layers = mlp.weights().size() - 1;
    std::vector<double> fractions(hidden_layers, 0.0);
    for (const Vec& x : X) {
        std::vector<Vec> acts = mlp.forward_trace(x);
        for (std::size_t l = 0; l < hidden_layers; ++l) {
            int off = 0;
            for (double a : acts[l])
                if (a <= fire_threshold) ++off;
            fractions[l] += static_cast<double>(off) / static_cast<double>(acts[l].size());
        }
    }
    for (double& f : fractions) f /= static_cast<double>(X.size());
    return fractions;
}

}  // namespace devnet
