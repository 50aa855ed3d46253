#include "sma/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "sma/finite_diff.hpp"
#include "sma/noise.hpp"

namespace sma {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Coordinates with gradient magnitude below this are compared against an
// absolute floor instead of a pure ratio; central differences of O(1) loss
// values carry ~1e-10 rounding noise, which would otherwise read as a large
// relative error on near-zero coordinates.
constexpr double kRelFloor = 1e-5;

// An argument sitting exactly on an L1 kink is harmless: the loss terms are
// linear in the probe, so the central difference cancels to the same zero the
// sign(0) = 0 convention picks. Only a small nonzero distance is dangerous
// (replicate-padding also produces structurally zero detail coefficients,
// which would otherwise mask out every series).
bool near_kink(double distance, double margin) {
    return distance != 0.0 && distance <= margin;
}

// The spectral signs carry a rounding-noise dead zone (see local_loss_grad),
// so arguments inside it are safe again; dangerous is the annulus between
// the dead zone and the margin, around both the 0 and the pi kink.
constexpr double kSignDeadZone = 1e-9;

bool near_amp_kink(double distance, double margin) {
    return distance > kSignDeadZone && distance <= margin;
}

bool near_phase_kink(double abs_diff, double margin) {
    if (abs_diff > kSignDeadZone && abs_diff <= margin) return true;
    return abs_diff >= kPi - margin && abs_diff < kPi - kSignDeadZone;
}

} // namespace

GradCheckReport check_sma_gradient(const MotionVectorSequence& ref,
                                   const MotionVectorSequence& pred, const SmaConfig& cfg,
                                   double fd_step, double kink_margin) {
    if (!ref.same_shape(pred))
        throw value_error("check_sma_gradient: shape mismatch");
    const std::size_t levels = resolve_levels(cfg, ref.entries());
    const WeightMap weight = freq_weight(ref.height(), ref.width(), cfg.delta);
    const std::size_t h = ref.height(), w = ref.width();
    const std::size_t chans = ref.channels();

    // Wavelet mask: a pixel series is comparable when every coefficient
    // difference sits clear of the sign flip.
    std::vector<bool> series_safe(ref.entry_size(), true);
    std::size_t s = 0;
    for (std::size_t c = 0; c < chans; ++c)
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x, ++s) {
                const auto wr = dwt1d(pixel_series(ref, c, y, x), levels);
                const auto wp = dwt1d(pixel_series(pred, c, y, x), levels);
                bool safe = true;
                for (std::size_t j = 0; j < levels && safe; ++j)
                    for (std::size_t k = 0; k < wr.detail[j].size(); ++k)
                        if (near_kink(std::abs(wp.detail[j][k] - wr.detail[j][k]),
                                      kink_margin)) {
                            safe = false;
                            break;
                        }
                for (std::size_t k = 0; k < wr.approx.size() && safe; ++k)
                    if (near_kink(std::abs(wp.approx[k] - wr.approx[k]), kink_margin))
                        safe = false;
                series_safe[s] = safe;
            }

    // Spectral mask: every cell of a plane must have usable magnitudes and
    // loss-term arguments away from kinks, otherwise the whole plane is out
    // (each pixel of the plane touches every cell).
    std::vector<bool> plane_safe(ref.entries() * chans, true);
    for (std::size_t n = 0; n < ref.entries(); ++n)
        for (std::size_t c = 0; c < chans; ++c) {
            const std::size_t off = c * h * w;
            const auto fr = dft2(ref.entry(n).subspan(off, h * w), h, w);
            const auto fp = dft2(pred.entry(n).subspan(off, h * w), h, w);
            bool safe = true;
            for (std::size_t a = 0; a < h && safe; ++a)
                for (std::size_t b = 0; b < w; ++b) {
                    const double ar = fr.amplitude(a, b);
                    const double ap = fp.amplitude(a, b);
                    if (std::min(ar, ap) <= kink_margin ||
                        near_amp_kink(std::abs(ap - ar), kink_margin)) {
                        safe = false;
                        break;
                    }
                    const double d = std::abs(wrap_phase(fr.phase(a, b) - fp.phase(a, b)));
                    if (near_phase_kink(d, kink_margin)) {
                        safe = false;
                        break;
                    }
                }
            plane_safe[n * chans + c] = safe;
        }

    const MotionVectorSequence analytic = sma_grad(ref, pred, cfg);
    auto total_of = [&](const std::vector<double>& x) {
        MotionVectorSequence cand(ref.entries(), chans, h, w, x);
        return sma_loss(ref, cand, cfg).total;
    };
    const std::vector<double> fd = central_gradient(total_of, pred.values(), fd_step);

    GradCheckReport report;
    report.total = pred.size();
    const std::size_t entry_size = ref.entry_size();
    const std::size_t plane_size = h * w;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const std::size_t n = i / entry_size;
        const std::size_t within = i % entry_size;
        const std::size_t c = within / plane_size;
        bool coord_safe = plane_safe[n * chans + c] && series_safe[within];
        if (cfg.align == AlignKind::l1 && coord_safe)
            coord_safe = !near_kink(std::abs(pred.values()[i] - ref.values()[i]),
                                    kink_margin);
        if (!coord_safe) {
            ++report.skipped;
            continue;
        }
        const double ga = analytic.values()[i];
        const double gf = fd[i];
        const double rel =
            std::abs(ga - gf) / std::max({std::abs(ga), std::abs(gf), kRelFloor});
        report.max_rel_error = std::max(report.max_rel_error, rel);
        ++report.checked;
    }
    return report;
}

GradCheckReport check_sma_gradient_seeded(std::uint64_t seed, std::size_t frames,
                                          std::size_t size, const SmaConfig& cfg,
                                          double fd_step, double kink_margin) {
    if (frames < 3 || size < 2)
        throw value_error("check_sma_gradient_seeded: need frames >= 3 and size >= 2");
    NoiseStream rng(seed);
    const std::size_t count = frames * size * size;
    VideoTensor ref_video(frames, 1, size, size, rng.gaussians(0, 0, count));
    VideoTensor pred_video(frames, 1, size, size, rng.gaussians(1, 0, count));
    return check_sma_gradient(motion_vectors(ref_video), motion_vectors(pred_video), cfg,
                              fd_step, kink_margin);
}

} // namespace sma
