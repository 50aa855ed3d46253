#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "sma/fourier.hpp"
#include "sma/tensor.hpp"
#include "sma/wavelet.hpp"

namespace sma {

enum class AlignKind { mse, l1, cosine };

std::string align_kind_name(AlignKind kind);
AlignKind parse_align_kind(const std::string& name);

/// levels == kAutoLevels resolves to auto_levels(N - 1).
inline constexpr std::size_t kAutoLevels = 0;

struct SmaConfig {
    double lambda_g = 0.4;
    double lambda_l = 0.2;
    double delta = 0.05;
    std::size_t levels = kAutoLevels;
    AlignKind align = AlignKind::mse;
};

struct LossBreakdown {
    double l_align = 0.0;
    double l_global = 0.0;
    double l_local_amp = 0.0;
    double l_local_phase = 0.0;
    double total = 0.0;
};

/// Base alignment term. mse and l1 are element-wise means; cosine averages
/// 1 - cosine similarity over flattened entries (a zero entry on one side
/// contributes 1, on both sides 0).
double align_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                  AlignKind kind);

MotionVectorSequence align_loss_grad(const MotionVectorSequence& ref,
                                     const MotionVectorSequence& pred, AlignKind kind);

std::size_t resolve_levels(const SmaConfig& cfg, std::size_t entry_count);

/// total = l_align + lambda_g * l_global + lambda_l * (l_local_amp + l_local_phase).
LossBreakdown sma_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                       const SmaConfig& cfg);

MotionVectorSequence sma_grad(const MotionVectorSequence& ref,
                              const MotionVectorSequence& pred, const SmaConfig& cfg);

/// Deterministic frame-wise feature extractor; must preserve the frame count.
using FeatureMap = std::function<VideoTensor(const VideoTensor&)>;

/// sma_loss on the motion vectors of the mapped videos.
LossBreakdown feature_sma_loss(const VideoTensor& source, const VideoTensor& target,
                               const FeatureMap& features, const SmaConfig& cfg);

/// Channel-preserving factor x factor mean pooling; dims must divide evenly.
VideoTensor average_pool(const VideoTensor& v, std::size_t factor);

/// {"l_align":...,"l_global":...,"l_local_amp":...,"l_local_phase":...,
///  "total":...,"config":{...}} with doubles at 17 significant digits.
std::string to_json(const LossBreakdown& b, const SmaConfig& cfg,
                    std::size_t resolved_levels);

} // namespace sma
