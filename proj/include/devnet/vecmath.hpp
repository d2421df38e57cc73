#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace devnet {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(const Vec& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

inline double distance(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Unit-normalized copy; the zero vector stays zero.
inline Vec normalized(const Vec& v) {
    double n = norm(v);
    if (n == 0.0) return Vec(v.size(), 0.0);
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool is_zero(const Vec& v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

}  // namespace devnet
