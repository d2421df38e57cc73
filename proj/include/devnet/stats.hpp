#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace devnet {

// Five-number distribution summary plus mean and population standard
// deviation — the statistics every report must carry instead of only the
// minimum. Quantiles use linear interpolation between closest ranks.
struct DistributionSummary {
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    double std = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
    if (sorted.size() == 1) return sorted[0];
    double h = p * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline DistributionSummary summarize_distribution(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize_distribution: empty input");
    std::sort(values.begin(), values.end());
    DistributionSummary s;
    s.count = values.size();
    s.min = values.front();
    s.max = values.back();
    s.q25 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.50);
    s.q75 = quantile_sorted(values, 0.75);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    s.mean = mean;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());  // population form
    s.std = std::sqrt(var);
    return s;
}

// One-sided exact sign test: probability of seeing >= positives successes
// among trials fair coin flips. Distribution-free, fine at desk scale.
inline double sign_test_p_greater(int positives, int trials) {
    if (trials < 0 || positives < 0 || positives > trials)
        throw std::invalid_argument("sign_test: bad counts");
    if (trials == 0) return 1.0;
    double p = 0.0;
    double log_half = std::log(0.5);
    for (int j = positives; j <= trials; ++j) {
        double log_c = std::lgamma(trials + 1.0) - std::lgamma(j + 1.0) -
                       std::lgamma(trials - j + 1.0);
        p += std::exp(log_c + trials * log_half);
    }
    return std::min(1.0, p);
}

}  // namespace devnet
