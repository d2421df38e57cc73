#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "devnet/vecmath.hpp"

namespace devnet {

// Nearest-neighbor classifier with a confidence threshold: stores the whole
// training set; answers the nearest stored label when the distance is within
// d, otherwise "unknown". Fitting error is zero for any d >= 0 by
// construction — the canonical over-fitter for the audit grid.

inline constexpr int kUnknownLabel = -1;

struct NnClassifier {
    std::vector<Vec> samples;
    std::vector<int> labels;
    double threshold = 0.0;  // Euclidean distance units
};

inline int predict(const NnClassifier& clf, const Vec& x) {
    if (clf.samples.empty()) throw std::logic_error("NnClassifier: empty training set");
    if (x.size() != clf.samples[0].size())
        throw std::invalid_argument("NnClassifier: dimension mismatch");
    std::size_t best = 0;
    double best_d = distance(clf.samples[0], x);
    for (std::size_t i = 1; i < clf.samples.size(); ++i) {
        double d = distance(clf.samples[i], x);
        if (d < best_d) {  // ties keep the lowest stored index
            best_d = d;
            best = i;
        }
    }
    return best_d <= clf.threshold ? clf.labels[best] : kUnknownLabel;
}

// Threshold grid per the mean/std recipe: d_bar is the average nearest
// distance from V into T, sigma its population standard deviation; the grid
// is (d_bar - sigma, d_bar, d_bar + sigma) with negative points clamped to 0.
inline std::array<double, 3> estimate_threshold_grid(const std::vector<Vec>& T,
                                                     const std::vector<Vec>& V) {
    if (T.empty() || V.empty())
        throw std::invalid_argument("estimate_threshold_grid: empty set");
    std::vector<double> nearest;
    nearest.reserve(V.size());
    for (const Vec& v : V) {
        double best = distance(T[0], v);
        for (std::size_t i = 1; i < T.size(); ++i) best = std::min(best, distance(T[i], v));
        nearest.push_back(best);
    }
    double mean = 0.0;
    for (double d : nearest) mean += d;
    mean /= static_cast<double>(nearest.size());
    double var = 0.0;
    for (double d : nearest) var += (d - mean) * (d - mean);
    var /= static_cast<double>(nearest.size());
    double sigma = std::sqrt(var);
    return {std::max(0.0, mean - sigma), mean, mean + sigma};
}

}  // namespace devnet
