// rng.hpp — Counter-based splittable random stream for reproducible trials

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace subfid {

// Every draw is a pure function of (key, counter), so a stream can be
// reconstructed from its seed and lane path alone. split() derives an
// independent child stream without advancing the parent; a harness gives
// trial k the stream master.split(k) and gets the same trial regardless of
// execution order or worker count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(mix(seed, 0x243F6A8885A308D3ULL)) {}

    // Child stream for the given lane. Does not touch the parent's counter.
    RngStream split(std::uint64_t lane) const {
        RngStream child(0);
        child.key_ = mix(key_ ^ 0x452821E638D01377ULL, lane);
        child.counter_ = 0;
        return child;
    }

    std::uint64_t next_u64() { return mix(key_, counter_++); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller (u1 kept away from 0 for the log).
    double normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::complex<double> normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    // splitmix64 finalizer over a keyed counter
    static std::uint64_t mix(std::uint64_t key, std::uint64_t ctr) {
        std::uint64_t z = key + 0x9E3779B97F4A7C15ULL * (ctr + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace subfid
