#pragma once

#include <cstdint>

namespace hklab {

// One splitmix64 step: mixes `state` forward and returns the mixed output.
// Fully specified arithmetic, so streams are identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of a seed with a stream index. Used for per-site trap
// values and for splitting a master seed into per-environment seeds, so
// that growing a window or raising M never reshuffles earlier draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// Maps 64 random bits to the open interval (0,1); never returns 0 or 1.
inline double to_unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Small deterministic PRNG used by all samplers. Not cryptographic.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in (0,1).
    double uniform01() { return to_unit_open(next_u64()); }

    // Uniform integer in [0, n). Debiased by rejection.
    std::uint64_t below(std::uint64_t n);

    // Exponential with the given mean.
    double exponential(double mean);

private:
    std::uint64_t state_;
};

}  // namespace hklab
