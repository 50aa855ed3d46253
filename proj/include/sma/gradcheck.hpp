#pragma once

#include <cstdint>

#include "sma/objective.hpp"

namespace sma {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t checked = 0; // coordinates compared
    std::size_t skipped = 0; // coordinates masked out near L1 kinks / tiny magnitudes
    std::size_t total = 0;

    bool passed(double tol = 1e-4) const { return checked > 0 && max_rel_error < tol; }
};

/// Compares sma_grad against a central finite difference of sma_loss(...).total.
/// Coordinates whose loss terms sit within kink_margin of an absolute-value
/// kink, a phase wrap, or a vanishing spectral magnitude are excluded; there
/// the subgradient convention and the difference quotient legitimately
/// disagree.
GradCheckReport check_sma_gradient(const MotionVectorSequence& ref,
                                   const MotionVectorSequence& pred, const SmaConfig& cfg,
                                   double fd_step = 1e-5, double kink_margin = 1e-3);

/// Same check on a seeded random instance: two gaussian videos with `frames`
/// frames of size x size pixels, reduced to motion vectors.
GradCheckReport check_sma_gradient_seeded(std::uint64_t seed, std::size_t frames,
                                          std::size_t size, const SmaConfig& cfg,
                                          double fd_step = 1e-5,
                                          double kink_margin = 1e-3);

} // namespace sma
