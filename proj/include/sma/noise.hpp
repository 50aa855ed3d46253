#pragma once

#include <cstdint>
#include <vector>

namespace sma {

/// Counter-based deterministic random source. Every draw is addressed by a
/// (stream, counter) pair, so independent consumers never share state and a
/// 64-bit seed reproduces an experiment bit-exactly regardless of call order.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Standard normal draws (Box-Muller over a splitmix64 stream).
    std::vector<double> gaussians(std::uint64_t stream, std::uint64_t counter,
                                  std::size_t count) const;

    /// One uniform draw in (0, 1].
    double uniform01(std::uint64_t stream, std::uint64_t counter) const;

    /// One uniform integer in [lo, hi].
    std::uint64_t uniform_int(std::uint64_t stream, std::uint64_t counter,
                              std::uint64_t lo, std::uint64_t hi) const;

private:
    std::uint64_t seed_;
};

} // namespace sma
