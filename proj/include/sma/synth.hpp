#pragma once

#include <cstdint>
#include <string>

#include "sma/tensor.hpp"

namespace sma {

enum class Pattern { translate_square, translate_impulse, rotate_bar };
enum class Background { flat, texture };
enum class Artifact { none, fence, stair, flicker };

std::string pattern_name(Pattern p);
Pattern parse_pattern(const std::string& name);
std::string background_name(Background b);
Background parse_background(const std::string& name);
std::string artifact_name(Artifact a);
Artifact parse_artifact(const std::string& name);

/// Single-channel synthetic video. Translate patterns move the object by an
/// exact integer (dx, dy) per frame as a circular shift, so ground truth
/// displacement is unambiguous. Artifacts inject motion-independent
/// distortions: fence adds a vertical stripe pattern of spatial period 2
/// with a fresh random phase per frame, stair a diagonal step texture with a
/// random per-frame offset, flicker an i.i.d. per-frame global intensity
/// jitter.
struct SynthSpec {
    Pattern pattern = Pattern::translate_square;
    std::size_t frames = 8;
    std::size_t size = 32; // H = W
    int dx = 2;            // pixels/frame along x (width)
    int dy = 0;            // pixels/frame along y (height)
    std::size_t object_size = 6;
    Background background = Background::flat;
    Artifact artifact = Artifact::none;
    double artifact_strength = 0.0;
    std::uint64_t seed = 0;
};

struct SynthResult {
    VideoTensor video;
    double velocity_dx = 0.0; // ground truth, zero for rotate_bar
    double velocity_dy = 0.0;
};

SynthResult synth_video(const SynthSpec& spec);

} // namespace sma
