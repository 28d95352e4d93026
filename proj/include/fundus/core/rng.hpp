#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace fundus {

// Counter-based deterministic random stream.
//
// Every draw is a pure function of (key, counter), so copies of an Rng
// replay the same sequence and named substreams are independent of how
// many values their parent has produced. This is what makes per-image
// phantom generation and per-component training streams reproducible
// regardless of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6c62272e07bb0142ULL)) {}

    // Derived stream, independent of this stream's position.
    Rng stream(std::string_view name) const {
        return Rng(key_ ^ fnv1a(name), tag{});
    }
    Rng stream(std::uint64_t index) const {
        return Rng(key_ ^ mix(index + 0x517cc1b727220a95ULL), tag{});
    }

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive bounds. Modulo bias is irrelevant at the ranges used here.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; always consumes exactly two draws.
    double normal() {
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    struct tag {};
    Rng(std::uint64_t key, tag) : key_(mix(key)) {}

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace fundus
