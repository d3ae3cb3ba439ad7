#pragma once

#include <cmath>
#include <cstdint>

namespace tasep {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based generator: draw c of stream s under seed k is mix64(key(k, s) + (c + 1) * gamma).
// Streams are derived from (seed, stream index) only, so any run can be replayed in isolation.
class Rng {
public:
    static constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;

    Rng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(mix64(seed + gamma) ^ (stream * 0xD1B54A32D192ED03ULL + 1))) {}

    std::uint64_t next() { return mix64(key_ + ++counter_ * gamma); }
    std::uint64_t counter() const { return counter_; }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return skew_ == 0 ? u : std::pow(u, 1 + skew_);
    }
    // Uniform on (0, 1].
    double open_uniform() { return 1.0 - uniform(); }
    bool bernoulli(double p) { return uniform() < p; }
    double exponential(double rate) { return -std::log(open_uniform()) / rate; }

    // Fault injection for harness self-tests: uniforms are replaced by u^(1 + skew).
    void inject_skew(double skew) { skew_ = skew; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double skew_ = 0;
};

}  // namespace tasep
