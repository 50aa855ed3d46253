#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sma/objective.hpp"
#include "sma/tensor.hpp"

namespace sma {

enum class InitKind { random, static_first_frame, copy_target };

std::string init_kind_name(InitKind k);
InitKind parse_init_kind(const std::string& name);

/// sample == false reproduces the noiseless path: motion vectors come
/// straight from the current pixels. With sampling on, each step draws a
/// timestep uniformly from [t_low, t_high] and runs the diffusion estimate
/// path instead.
struct TimestepPolicy {
    bool sample = false;
    std::size_t t_low = 1;
    std::size_t t_high = 1;
};

struct TransferConfig {
    std::size_t steps = 500;
    double step_size = 0.05;
    InitKind init = InitKind::static_first_frame;
    SmaConfig sma;
    TimestepPolicy timesteps;
    std::uint64_t seed = 0;
};

struct Displacement {
    double dx = 0.0;
    double dy = 0.0;
};

struct TransferReport {
    std::vector<LossBreakdown> loss_trace; // one entry per step, pre-update
    double displacement_error = 0.0;       // mean L2 px/frame vs the reference velocity
    double hf_energy_ratio = 0.0;          // output HF energy over clean-source HF energy
};

struct TransferResult {
    VideoTensor output;
    TransferReport report;
};

/// Dominant integer displacement of each consecutive frame pair via phase
/// correlation (normalized cross-power spectrum, inverse transform, argmax
/// over circular shifts), reported in signed circular coordinates
/// (-H/2, H/2] x (-W/2, W/2].
std::vector<Displacement> estimate_displacement(const VideoTensor& v);

/// Spectral energy of `out` at centered radius > min(H, W)/4, relative to the
/// same band of `clean`; the denominator is floored at kMagnitudeEps.
double hf_energy_ratio(const MotionVectorSequence& out, const MotionVectorSequence& clean);

/// Latent-optimization motion transfer: gradient descent over the target
/// pixels with steps of fixed Euclidean length cfg.step_size.
/// true_velocity, when given, is the reference for displacement_error
/// (otherwise the source's own phase-correlation estimate is used);
/// clean_source, when given, is the artifact-free reference for
/// hf_energy_ratio (otherwise the source itself).
TransferResult transfer(const VideoTensor& source, const TransferConfig& cfg,
                        const std::optional<Displacement>& true_velocity = std::nullopt,
                        const VideoTensor* clean_source = nullptr);

/// CSV with header "step,l_align,l_global,l_local_amp,l_local_phase,total".
void write_trace_csv(std::ostream& out, const std::vector<LossBreakdown>& trace);

/// Full report including the resolved configuration; byte-deterministic.
std::string to_json(const TransferReport& report, const TransferConfig& cfg);

} // namespace sma
