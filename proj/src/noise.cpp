#include "sma/noise.hpp"

#include <cmath>

#include "sma/errors.hpp"

namespace sma {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_state(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
    std::uint64_t s = mix64(seed + 0x9E3779B97F4A7C15ull);
    s = mix64(s ^ (stream * 0xC2B2AE3D27D4EB4Full + 1));
    s = mix64(s ^ (counter * 0x165667B19E3779F9ull + 1));
    return s;
}

std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    return mix64(state);
}

// Uniform in (0, 1]; never returns 0 so log() below is safe.
double to_unit(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

} // namespace

std::vector<double> NoiseStream::gaussians(std::uint64_t stream, std::uint64_t counter,
                                           std::size_t count) const {
    std::vector<double> out;
    out.reserve(count);
    std::uint64_t state = derive_state(seed_, stream, counter);
    while (out.size() < count) {
        const double u1 = to_unit(next_u64(state));
        const double u2 = to_unit(next_u64(state));
        const double r = std::sqrt(-2.0 * std::log(u1));
        out.push_back(r * std::cos(kTwoPi * u2));
        if (out.size() < count) out.push_back(r * std::sin(kTwoPi * u2));
    }
    return out;
}

double NoiseStream::uniform01(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t state = derive_state(seed_, stream, counter);
    return to_unit(next_u64(state));
}

std::uint64_t NoiseStream::uniform_int(std::uint64_t stream, std::uint64_t counter,
                                       std::uint64_t lo, std::uint64_t hi) const {
    if (lo > hi)
        throw value_error("uniform_int: empty range");
    std::uint64_t state = derive_state(seed_, stream, counter);
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next_u64(state); // full 64-bit range
    return lo + next_u64(state) % span;
}

} // namespace sma
