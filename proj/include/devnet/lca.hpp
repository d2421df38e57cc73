#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "devnet/vecmath.hpp"

namespace devnet {

// Candid covariance-free incremental lobe-component analysis.
//
// A neuron keeps a weight vector and a firing age. Each time it wins a
// competition and fires with response r, its weight moves by
//
//     v <- (1 - 1/a') v + (1/a') r x        with a' = a + 1.
//
// The retention rate (1 - 1/a') and the learning rate (1/a') always sum to
// exactly 1 ("candid"), so with unit-norm inputs and r in [0, 1] the weight
// norm can never grow past 1. At the first firing the retention rate is 0
// and the weight becomes r x regardless of how it was initialized.

struct NeuronState {
    Vec weight;
    long firing_age = 0;
    bool active = false;
};

// Growing match threshold m(t) = (1 - delta)(1 - e^{-t/t1}) gating neuron
// recruitment: delta is the machine round-off bound, t1 the childhood length.
struct MatchSchedule {
    double delta = 1e-6;
    double childhood_length = 1000.0;
};

inline void validate_schedule(const MatchSchedule& s) {
    if (!(s.delta > 0.0 && s.delta < 1.0))
        throw std::invalid_argument("MatchSchedule: delta must lie in (0,1)");
    if (!(s.childhood_length > 0.0))
        throw std::invalid_argument("MatchSchedule: childhood_length must be positive");
}

inline double match_threshold(double t, const MatchSchedule& s) {
    if (t < 0.0) throw std::invalid_argument("match_threshold: t must be >= 0");
    return (1.0 - s.delta) * (1.0 - std::exp(-t / s.childhood_length));
}

// Cosine between weight and input. A zero weight (virgin neuron) responds 0,
// so it can never beat a genuine match.
inline double pre_response(const NeuronState& neuron, const Vec& input) {
    if (!neuron.active)
        throw std::invalid_argument("pre_response: neuron is not active");
    if (input.size() != neuron.weight.size())
        throw std::invalid_argument("pre_response: dimension mismatch");
    double nx = norm(input);
    if (nx == 0.0)
        throw std::invalid_argument("pre_response: zero input vector");
    double nw = norm(neuron.weight);
    if (nw == 0.0) return 0.0;
    return dot(neuron.weight, input) / (nw * nx);
}

// Linear response |x| cos(weight, x): the signed projection of the input
// onto the unit weight direction. Feeding this back as r makes lca_update
// an incremental estimator of the first principal component.
inline double projection_response(const NeuronState& neuron, const Vec& input) {
    return pre_response(neuron, input) * norm(input);
}

inline NeuronState lca_update(NeuronState neuron, const Vec& input, double response) {
    if (!neuron.active)
        throw std::invalid_argument("lca_update: neuron is not active");
    if (input.size() != neuron.weight.size())
        throw std::invalid_argument("lca_update: dimension mismatch");
    if (!all_finite(input) || !std::isfinite(response))
        throw std::invalid_argument("lca_update: non-finite input");

    neuron.firing_age += 1;
    double learning_rate = 1.0 / static_cast<double>(neuron.firing_age);
    double retention_rate = 1.0 - learning_rate;  // retention + learning == 1 exactly
    for (std::size_t i = 0; i < neuron.weight.size(); ++i)
        neuron.weight[i] = retention_rate * neuron.weight[i] + learning_rate * response * input[i];
    return neuron;
}

struct Winner {
    int index;
    int rank;         // 1 = best
    double response;  // firing value: (k - rank + 1) / k, so rank 1 fires at 1
};

// Indices of the k largest pre-responses, ties broken by lowest index.
// k larger than the candidate count clamps to the candidate count.
inline std::vector<Winner> top_k_compete(const Vec& pre_responses, int k) {
    if (k < 1) throw std::invalid_argument("top_k_compete: k must be >= 1");
    if (pre_responses.empty())
        throw std::invalid_argument("top_k_compete: no candidates");
    int n = static_cast<int>(pre_responses.size());
    k = std::min(k, n);

    std::vector<int> order(pre_responses.size());
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pre_responses[a] > pre_responses[b];
    });

    std::vector<Winner> winners;
    winners.reserve(static_cast<std::size_t>(k));
    for (int rank = 1; rank <= k; ++rank) {
        double response = static_cast<double>(k - rank + 1) / static_cast<double>(k);
        winners.push_back({order[static_cast<std::size_t>(rank - 1)], rank, response});
    }
    return winners;
}

}  // namespace devnet
