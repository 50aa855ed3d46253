#include "sma/synth.hpp"

#include <cmath>

#include "sma/noise.hpp"

namespace sma {

namespace {

// Amplitude of the synthetic foreground relative to a unit-scale canvas.
constexpr double kObjectAmplitude = 0.5;
constexpr double kTextureAmplitude = 0.2;

// NoiseStream lanes.
constexpr std::uint64_t kLaneTexture = 100;
constexpr std::uint64_t kLaneArtifactPhase = 101;
constexpr std::uint64_t kLaneFlicker = 102;

std::size_t wrap(long v, std::size_t n) {
    long m = v % static_cast<long>(n);
    if (m < 0) m += static_cast<long>(n);
    return static_cast<std::size_t>(m);
}

} // namespace

std::string pattern_name(Pattern p) {
    switch (p) {
        case Pattern::translate_square: return "translate-square";
        case Pattern::translate_impulse: return "translate-impulse";
        case Pattern::rotate_bar: return "rotate-bar";
    }
    return "translate-square";
}

Pattern parse_pattern(const std::string& name) {
    if (name == "translate-square") return Pattern::translate_square;
    if (name == "translate-impulse") return Pattern::translate_impulse;
    if (name == "rotate-bar") return Pattern::rotate_bar;
    throw value_error("unknown pattern: " + name);
}

std::string background_name(Background b) {
    return b == Background::flat ? "flat" : "texture";
}

Background parse_background(const std::string& name) {
    if (name == "flat") return Background::flat;
    if (name == "texture") return Background::texture;
    throw value_error("unknown background: " + name);
}

std::string artifact_name(Artifact a) {
    switch (a) {
        case Artifact::none: return "none";
        case Artifact::fence: return "fence";
        case Artifact::stair: return "stair";
        case Artifact::flicker: return "flicker";
    }
    return "none";
}

Artifact parse_artifact(const std::string& name) {
    if (name == "none") return Artifact::none;
    if (name == "fence") return Artifact::fence;
    if (name == "stair") return Artifact::stair;
    if (name == "flicker") return Artifact::flicker;
    throw value_error("unknown artifact: " + name);
}

SynthResult synth_video(const SynthSpec& spec) {
    if (spec.frames < 2)
        throw value_error("synth_video: need at least 2 frames");
    if (spec.size < 4)
        throw value_error("synth_video: size must be at least 4");
    if (spec.object_size < 1 || spec.object_size > spec.size)
        throw value_error("synth_video: object_size must lie in 1..size");
    if (spec.artifact_strength < 0.0)
        throw value_error("synth_video: artifact_strength must be nonnegative");
    if (spec.artifact != Artifact::none && spec.artifact_strength == 0.0)
        throw value_error("synth_video: artifact requested with zero strength");

    const std::size_t n_frames = spec.frames;
    const std::size_t size = spec.size;
    NoiseStream rng(spec.seed);

    // Static background, identical in every frame.
    std::vector<double> bg(size * size, 0.0);
    if (spec.background == Background::texture) {
        std::size_t i = 0;
        for (std::size_t y = 0; y < size; ++y) {
            const auto row = rng.gaussians(kLaneTexture, y, size);
            for (std::size_t x = 0; x < size; ++x, ++i)
                bg[i] = kTextureAmplitude * 0.5 * (1.0 + std::tanh(row[x]));
        }
    }

    // Object mask at its frame-0 position.
    std::vector<double> mask(size * size, 0.0);
    const std::size_t start = size / 4;
    switch (spec.pattern) {
        case Pattern::translate_square:
            for (std::size_t y = 0; y < spec.object_size; ++y)
                for (std::size_t x = 0; x < spec.object_size; ++x)
                    mask[((start + y) % size) * size + (start + x) % size] = 1.0;
            break;
        case Pattern::translate_impulse:
            mask[start * size + start] = 1.0;
            break;
        case Pattern::rotate_bar:
            break; // drawn per frame below
    }

    VideoTensor video(n_frames, 1, size, size);
    const double half = static_cast<double>(size) / 2.0;
    const double bar_len = static_cast<double>(size) / 2.0 - 1.0;
    const double bar_thick = std::max<double>(1.0, static_cast<double>(spec.object_size) / 2.0);
    for (std::size_t n = 0; n < n_frames; ++n) {
        auto frame = video.frame(n);
        for (std::size_t i = 0; i < size * size; ++i) frame[i] = bg[i];
        if (spec.pattern == Pattern::rotate_bar) {
            const double angle = static_cast<double>(n) * 3.14159265358979323846 /
                                 static_cast<double>(n_frames);
            const double ca = std::cos(angle), sa = std::sin(angle);
            for (std::size_t y = 0; y < size; ++y)
                for (std::size_t x = 0; x < size; ++x) {
                    const double px = static_cast<double>(x) - half;
                    const double py = static_cast<double>(y) - half;
                    const double along = px * ca + py * sa;
                    const double across = -px * sa + py * ca;
                    if (std::abs(along) <= bar_len / 2.0 &&
                        std::abs(across) <= bar_thick / 2.0)
                        frame[y * size + x] += kObjectAmplitude;
                }
        } else {
            const long off_x = static_cast<long>(n) * spec.dx;
            const long off_y = static_cast<long>(n) * spec.dy;
            for (std::size_t y = 0; y < size; ++y)
                for (std::size_t x = 0; x < size; ++x) {
                    const std::size_t sy = wrap(static_cast<long>(y) - off_y, size);
                    const std::size_t sx = wrap(static_cast<long>(x) - off_x, size);
                    frame[y * size + x] += kObjectAmplitude * mask[sy * size + sx];
                }
        }
        switch (spec.artifact) {
            case Artifact::none:
                break;
            case Artifact::fence: {
                const std::size_t phase = rng.uniform_int(kLaneArtifactPhase, n, 0, 1);
                for (std::size_t y = 0; y < size; ++y)
                    for (std::size_t x = 0; x < size; ++x)
                        frame[y * size + x] += spec.artifact_strength *
                                               (((x + phase) % 2 == 0) ? 1.0 : -1.0);
                break;
            }
            case Artifact::stair: {
                const std::size_t phase = rng.uniform_int(kLaneArtifactPhase, n, 0, 3);
                for (std::size_t y = 0; y < size; ++y)
                    for (std::size_t x = 0; x < size; ++x)
                        frame[y * size + x] += spec.artifact_strength *
                                               ((((x + y + phase) / 2) % 2 == 0) ? 1.0 : -1.0);
                break;
            }
            case Artifact::flicker: {
                const double jitter = rng.gaussians(kLaneFlicker, n, 1)[0];
                for (std::size_t i = 0; i < size * size; ++i)
                    frame[i] += spec.artifact_strength * jitter;
                break;
            }
        }
    }
    video.ensure_finite("synth_video");
    SynthResult out{std::move(video), 0.0, 0.0};
    if (spec.pattern != Pattern::rotate_bar) {
        out.velocity_dx = static_cast<double>(spec.dx);
        out.velocity_dy = static_cast<double>(spec.dy);
    }
    return out;
}

} // namespace sma
