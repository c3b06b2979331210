#pragma once

#include <cstdint>

namespace mlab {

// Counter-based generator in SplitMix64 output mode: the n-th variate of a
// stream is mix(key + n*GAMMA), so any stream can be replayed or split
// without touching the others.  Streams are derived from (master seed,
// stream id); replicas use their replica index as the stream id, which is
// the splitting rule recorded in experiment manifests.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream)
        : key_(mix(master_seed ^ mix(stream * GAMMA + 0x1d8e4e27c47d124fULL))) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * GAMMA); }

    // uniform on (0,1), never 0 or 1; 53-bit resolution shifted by half a ulp
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // uniform on [lo, hi)
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

private:
    static constexpr std::uint64_t GAMMA = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Deterministic hash of an unordered site pair, used for quenched bond
// disorder: symmetric in (i, j) and independent of everything else.
inline double pair_hash_open01(std::uint64_t seed, long i, long j) {
    if (i > j) { long t = i; i = j; j = t; }
    std::uint64_t h = CounterRng::mix(seed ^ 0x5851f42d4c957f2dULL);
    h = CounterRng::mix(h ^ static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL);
    h = CounterRng::mix(h ^ static_cast<std::uint64_t>(j) * 0xc2b2ae3d27d4eb4fULL);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace mlab
