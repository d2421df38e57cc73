#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace devnet {

// Running lifetime average of per-step motor errors, updated incrementally:
//     mean(t) = ((t-1)/t) mean(t-1) + (1/t) e_t.
// The full log is retained so windowed averages over [t1, t2] stay available.
class DevErrorTracker {
public:
    void record(double e) {
        if (!(e >= 0.0))
            throw std::invalid_argument("DevErrorTracker: error must be >= 0");
        count_ += 1;
        double t = static_cast<double>(count_);
        mean_ = ((t - 1.0) / t) * mean_ + (1.0 / t) * e;
        log_.push_back(e);
    }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    const std::vector<double>& log() const { return log_; }

    // Arithmetic mean of e over record indices [t1, t2] inclusive.
    double window_mean(std::size_t t1, std::size_t t2) const {
        if (t1 > t2 || t2 >= log_.size())
            throw std::out_of_range("DevErrorTracker: window out of range");
        double s = 0.0;
        for (std::size_t i = t1; i <= t2; ++i) s += log_[i];
        return s / static_cast<double>(t2 - t1 + 1);
    }

    // Used by snapshot loading; restores an exact saved state.
    static DevErrorTracker restore(double mean, std::vector<double> log) {
        DevErrorTracker t;
        t.mean_ = mean;
        t.log_ = std::move(log);
        t.count_ = t.log_.size();
        return t;
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    std::vector<double> log_;
};

}  // namespace devnet
