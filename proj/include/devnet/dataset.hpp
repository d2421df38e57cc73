#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "devnet/automata.hpp"
#include "devnet/rng.hpp"
#include "devnet/vecmath.hpp"

namespace devnet {

struct Dataset {
    std::vector<Vec> x;
    std::vector<int> y;
    int classes = 0;
    std::string description;

    std::size_t size() const { return x.size(); }
    int dim() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }
};

// ---- built-in generators --------------------------------------------------

struct GaussianClustersSpec {
    int classes = 2;
    int dim = 2;
    std::size_t size = 100;
    double spread = 1.0;         // per-class standard deviation
    double center_radius = 3.0;  // class centers on a circle of this radius
    double label_noise = 0.0;    // probability a label is flipped to another class
};

// Balanced classes (round-robin), centers equally spaced on a circle in the
// first two dimensions. Label noise reassigns to a uniformly random other
// class after generation.
inline Dataset make_gaussian_clusters(const GaussianClustersSpec& spec, std::uint64_t seed) {
    if (spec.classes < 1 || spec.dim < 1 || spec.size == 0)
        throw std::invalid_argument("gaussian-clusters: bad spec");
    Dataset d;
    d.classes = spec.classes;
    d.description = "gaussian-clusters";
    std::vector<Vec> centers(static_cast<std::size_t>(spec.classes),
                             Vec(static_cast<std::size_t>(spec.dim), 0.0));
    for (int c = 0; c < spec.classes; ++c) {
        double angle = 6.283185307179586 * static_cast<double>(c) / spec.classes;
        centers[static_cast<std::size_t>(c)][0] = spec.center_radius * std::cos(angle);
        if (spec.dim > 1) centers[static_cast<std::size_t>(c)][1] = spec.center_radius * std::sin(angle);
    }
    Rng rng(derive_seed(seed, "gaussian-clusters"));
    for (std::size_t i = 0; i < spec.size; ++i) {
        int label = static_cast<int>(i % static_cast<std::size_t>(spec.classes));
        Vec x(static_cast<std::size_t>(spec.dim));
        for (int k = 0; k < spec.dim; ++k)
            x[static_cast<std::size_t>(k)] =
                centers[static_cast<std::size_t>(label)][static_cast<std::size_t>(k)] +
                spec.spread * rng.normal();
        d.x.push_back(std::move(x));
        d.y.push_back(label);
    }
    if (spec.label_noise > 0.0 && spec.classes > 1) {
        Rng noise(derive_seed(seed, "label-noise"));
        for (int& label : d.y) {
            if (noise.uniform() < spec.label_noise) {
                int other = static_cast<int>(noise.bounded(static_cast<std::uint64_t>(spec.classes - 1)));
                label = other >= label ? other + 1 : other;
            }
        }
    }
    return d;
}

struct NoisyParitySpec {
    int dim = 4;
    std::size_t size = 200;
    double flip_prob = 0.0;  // probability the parity label is flipped
};

inline Dataset make_noisy_parity(const NoisyParitySpec& spec, std::uint64_t seed) {
    if (spec.dim < 1 || spec.size == 0) throw std::invalid_argument("noisy-parity: bad spec");
    Dataset d;
    d.classes = 2;
    d.description = "noisy-parity";
    Rng rng(derive_seed(seed, "noisy-parity"));
    for (std::size_t i = 0; i < spec.size; ++i) {
        Vec x(static_cast<std::size_t>(spec.dim));
        int parity = 0;
        for (int k = 0; k < spec.dim; ++k) {
            int bit = static_cast<int>(rng.bounded(2));
            x[static_cast<std::size_t>(k)] = static_cast<double>(bit);
            parity ^= bit;
        }
        if (spec.flip_prob > 0.0 && rng.uniform() < spec.flip_prob) parity ^= 1;
        d.x.push_back(std::move(x));
        d.y.push_back(parity);
    }
    return d;
}

struct FaCorpusSpec {
    std::size_t sequences = 20;
    std::size_t length = 5;
};

// Random symbol sequences driven through the automaton; each observed
// transition becomes one sample: features = one-hot(state) ++ one-hot(symbol),
// label = the next state. The corpus is exactly the kind of sensorimotor
// stream a DN memorizes in one pass.
inline Dataset make_fa_corpus(const FiniteAutomaton& fa, const FaCorpusSpec& spec,
                              std::uint64_t seed) {
    if (spec.sequences == 0 || spec.length == 0)
        throw std::invalid_argument("fa-corpus: bad spec");
    Dataset d;
    d.classes = fa.num_states();
    d.description = "fa-corpus(" + fa.name + ")";
    Rng rng(derive_seed(seed, "fa-corpus"));
    int nq = fa.num_states(), ns = fa.num_symbols();
    for (std::size_t s = 0; s < spec.sequences; ++s) {
        int q = fa.initial_state;
        for (std::size_t t = 0; t < spec.length; ++t) {
            int sigma = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(ns)));
            Vec x(static_cast<std::size_t>(nq + ns), 0.0);
            x[static_cast<std::size_t>(q)] = 1.0;
            x[static_cast<std::size_t>(nq + sigma)] = 1.0;
            int next = fa.next(q, sigma);
            d.x.push_back(std::move(x));
            d.y.push_back(next);
            q = next;
        }
    }
    return d;
}

// ---- CSV ------------------------------------------------------------------

inline void write_dataset_csv(std::ostream& os, const Dataset& d) {
    for (int k = 0; k < d.dim(); ++k) os << 'x' << k << ',';
    os << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double v : d.x[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf << ',';
        }
        os << d.y[i] << '\n';
    }
}

inline Dataset read_dataset_csv(std::istream& is) {
    Dataset d;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("dataset csv: empty file");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 2) throw std::runtime_error("dataset csv: malformed row");
        Vec x;
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) x.push_back(std::stod(cells[i]));
        int label = std::stoi(cells.back());
        d.x.push_back(std::move(x));
        d.y.push_back(label);
        d.classes = std::max(d.classes, label + 1);
    }
    return d;
}

}  // namespace devnet
