#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pqc/common.hpp"

namespace pqc {

// Deterministic RNG. mt19937_64 output is fully specified by the standard;
// the distribution helpers below are hand-rolled so that sampled values are
// reproducible across standard library implementations as well.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(splitmix64(seed)) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        // modulo bias is < 2^-44 for the spans used here
        return lo + static_cast<long long>(eng_() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(uniform_int(0, static_cast<long long>(v.size()) - 1))];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(0, static_cast<long long>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace pqc
