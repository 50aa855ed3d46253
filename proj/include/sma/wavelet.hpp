#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sma/tensor.hpp"

namespace sma {

struct HaarFilters {
    std::array<double, 2> lowpass;  // (1/sqrt2) [1, 1]
    std::array<double, 2> highpass; // (1/sqrt2) [-1, 1]
};

HaarFilters haar_filters();

/// Maximum useful decomposition depth: ceil(log2(series_length)).
std::size_t auto_levels(std::size_t series_length);

/// Multi-level orthonormal Haar decomposition of a temporal series.
/// Odd-length inputs are replicate-padded by one sample at each level, so
/// any depth up to auto_levels(length) is valid for any length >= 2.
struct WaveletCoefficients {
    std::size_t levels = 0;
    std::vector<std::vector<double>> detail; // detail[j-1] for level j, finest first
    std::vector<double> approx;              // approximation at the coarsest level
    std::size_t original_length = 0;

    std::size_t coefficient_count() const;
};

WaveletCoefficients dwt1d(const PixelSeries& x, std::size_t levels);

/// Exact synthesis inverse of dwt1d, padding removed.
PixelSeries idwt1d(const WaveletCoefficients& c);

/// Mean absolute difference of wavelet coefficients over all pixel series,
/// levels and positions (detail bands of every level plus the final
/// approximation band, uniformly weighted).
double global_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                   std::size_t levels);

/// Gradient of global_loss with respect to pred: coefficient-space L1
/// subgradient (sign(0) = 0) pulled back through the transform adjoint.
MotionVectorSequence global_loss_grad(const MotionVectorSequence& ref,
                                      const MotionVectorSequence& pred,
                                      std::size_t levels);

/// CSV export, header "pixel,level,band,k,value"; pixel is the flattened
/// (c, y, x) index, band is "detail" or "approx" (approx rows carry the
/// coarsest level).
void write_wavelet_csv(std::ostream& out, const MotionVectorSequence& m,
                       std::size_t levels);

} // namespace sma
