#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace devnet {

// All randomness in the library flows from one master seed through named
// derivation domains (see derive_seed below), so adding a new consumer of
// randomness never perturbs another's stream and results are independent
// of scheduling.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014): tiny state, fully
// portable output, good enough statistics for desk-scale simulation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; two draws per call, no cached state
    // so copies of an Rng stay in lockstep.
    double normal() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Unbiased-enough bounded draw (Lemire multiply-shift).
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}
}  // namespace detail

// Seed derivation: master seed + domain tag + up to two counters.
// Documented scheme (FORMATS.md): three rounds of the SplitMix64 finalizer
// over master ^ fnv1a(domain), then the counters.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view domain,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = detail::mix64(master ^ detail::fnv1a(domain));
    s = detail::mix64(s ^ (a + 0x9E3779B97F4A7C15ULL));
    s = detail::mix64(s ^ (b + 0xD1B54A32D192ED03ULL));
    return s;
}

}  // namespace devnet
