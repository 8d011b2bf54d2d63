#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pramcc {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_name(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL)); }

/// Deterministic stream; uniform/bernoulli/below are computed here rather than
/// through <random> distributions so results do not depend on the stdlib.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    /// Uniform integer in [0, k).
    std::uint64_t below(std::uint64_t k) {
        if (k <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % k;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace pramcc
