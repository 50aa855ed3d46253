#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "sma/tensor.hpp"

namespace sma {

/// Amplitudes below this are treated as zero (undefined phase, clamped
/// gradient denominators, floored energy ratios).
inline constexpr double kMagnitudeEps = 1e-12;

/// Centered 2D frequency grid of one frame; DC sits at (H/2, W/2).
/// Forward transform is unnormalized, the inverse carries 1/(H*W).
struct ComplexSpectrum {
    std::size_t height = 0, width = 0;
    std::vector<double> re, im; // row-major, index a * width + b
    bool centered = true;

    double real_at(std::size_t a, std::size_t b) const { return re[a * width + b]; }
    double imag_at(std::size_t a, std::size_t b) const { return im[a * width + b]; }
    double amplitude(std::size_t a, std::size_t b) const;
    double phase(std::size_t a, std::size_t b) const; // full-quadrant, in (-pi, pi]
};

ComplexSpectrum dft2(std::span<const double> frame, std::size_t height, std::size_t width);

std::vector<double> idft2(const ComplexSpectrum& spec);

/// Maps a phase difference into (-pi, pi].
double wrap_phase(double delta);

/// Radially decreasing low-frequency emphasis on the centered grid:
/// w(a,b) = [(H/2)^2 + (W/2)^2]^delta - [(a-H/2)^2 + (b-W/2)^2]^delta + 1
/// for 0 < a < H and 0 < b < W, zero on the a = 0 and b = 0 boundaries.
struct WeightMap {
    std::size_t height = 0, width = 0;
    double delta = 0.0;
    std::vector<double> w;

    double at(std::size_t a, std::size_t b) const { return w[a * width + b]; }
};

WeightMap freq_weight(std::size_t height, std::size_t width, double delta);

/// Weighted mean absolute amplitude difference over all frames and cells.
double local_amp_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                      const WeightMap& weight);

/// Weighted mean absolute wrapped phase difference; cells where both
/// amplitudes fall below kMagnitudeEps are excluded from the mean.
double local_phase_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                        const WeightMap& weight);

struct LocalLosses {
    double amplitude = 0.0;
    double phase = 0.0;
};

/// Both local losses from one pass over the spectra.
LocalLosses local_spectral_losses(const MotionVectorSequence& ref,
                                  const MotionVectorSequence& pred,
                                  const WeightMap& weight);

/// Gradient of local_amp_loss + local_phase_loss with respect to pred,
/// chained through the transform adjoint with clamped denominators.
MotionVectorSequence local_loss_grad(const MotionVectorSequence& ref,
                                     const MotionVectorSequence& pred,
                                     const WeightMap& weight);

/// CSV export, header "frame,a,b,amplitude,phase" in centered coordinates;
/// frame is the 1-based transition index.
void write_spectrum_csv(std::ostream& out, const MotionVectorSequence& m,
                        std::size_t channel = 0);

namespace detail {

/// Unnormalized complex 2D DFT in raw (uncentered) layout; inverse = true
/// flips the exponent sign but does not normalize.
void dft2_complex(const std::vector<double>& in_re, const std::vector<double>& in_im,
                  std::vector<double>& out_re, std::vector<double>& out_im,
                  std::size_t height, std::size_t width, bool inverse);

} // namespace detail

} // namespace sma
