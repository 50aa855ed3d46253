#include "sma/wavelet.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sma/json_writer.hpp"

namespace sma {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_levels(std::size_t levels, std::size_t length, const char* what) {
    const std::size_t max_levels = auto_levels(length);
    if (levels < 1 || levels > max_levels)
        throw value_error(std::string(what) + ": levels " + std::to_string(levels) +
                          " outside 1.." + std::to_string(max_levels) + " for length " +
                          std::to_string(length));
}

// Input length of level j (1-based) before padding.
std::size_t level_length(std::size_t original_length, std::size_t level) {
    std::size_t len = original_length;
    for (std::size_t j = 1; j < level; ++j) len = (len + 1) / 2;
    return len;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Coefficients per series for a given length/depth; identical for every pixel.
std::size_t coeff_count(std::size_t length, std::size_t levels) {
    std::size_t total = 0;
    std::size_t len = length;
    for (std::size_t j = 0; j < levels; ++j) {
        len = (len + 1) / 2;
        total += len;
    }
    return total + len; // detail bands plus final approximation
}

} // namespace

HaarFilters haar_filters() {
    return {{kInvSqrt2, kInvSqrt2}, {-kInvSqrt2, kInvSqrt2}};
}

std::size_t auto_levels(std::size_t series_length) {
    if (series_length < 2)
        throw value_error("auto_levels: series length must be at least 2");
    std::size_t levels = 0;
    std::size_t reach = 1;
    while (reach < series_length) {
        reach *= 2;
        ++levels;
    }
    return levels;
}

std::size_t WaveletCoefficients::coefficient_count() const {
    std::size_t total = approx.size();
    for (const auto& band : detail) total += band.size();
    return total;
}

WaveletCoefficients dwt1d(const PixelSeries& x, std::size_t levels) {
    check_levels(levels, x.size(), "dwt1d");
    WaveletCoefficients c;
    c.levels = levels;
    c.original_length = x.size();
    std::vector<double> cur = x;
    for (std::size_t j = 0; j < levels; ++j) {
        if (cur.size() % 2 != 0) cur.push_back(cur.back());
        const std::size_t half = cur.size() / 2;
        std::vector<double> approx(half), det(half);
        for (std::size_t k = 0; k < half; ++k) {
            approx[k] = (cur[2 * k] + cur[2 * k + 1]) * kInvSqrt2;
            det[k] = (cur[2 * k + 1] - cur[2 * k]) * kInvSqrt2;
        }
        c.detail.push_back(std::move(det));
        cur = std::move(approx);
    }
    c.approx = std::move(cur);
    return c;
}

PixelSeries idwt1d(const WaveletCoefficients& c) {
    if (c.levels == 0 || c.detail.size() != c.levels || c.original_length < 2)
        throw value_error("idwt1d: malformed coefficient structure");
    for (std::size_t j = 1; j <= c.levels; ++j) {
        const std::size_t len = level_length(c.original_length, j);
        if (c.detail[j - 1].size() != (len + 1) / 2)
            throw value_error("idwt1d: inconsistent band length at level " +
                              std::to_string(j));
    }
    if (c.approx.size() != level_length(c.original_length, c.levels + 1))
        throw value_error("idwt1d: inconsistent approximation length");

    std::vector<double> cur = c.approx;
    for (std::size_t j = c.levels; j >= 1; --j) {
        const auto& det = c.detail[j - 1];
        std::vector<double> out(2 * det.size());
        for (std::size_t k = 0; k < det.size(); ++k) {
            out[2 * k] = (cur[k] - det[k]) * kInvSqrt2;
            out[2 * k + 1] = (cur[k] + det[k]) * kInvSqrt2;
        }
        out.resize(level_length(c.original_length, j)); // drop the padded sample
        cur = std::move(out);
    }
    return cur;
}

double global_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                   std::size_t levels) {
    if (!ref.same_shape(pred))
        throw value_error("global_loss: shape mismatch");
    check_levels(levels, ref.entries(), "global_loss");
    double sum = 0.0;
    for (std::size_t c = 0; c < ref.channels(); ++c) {
        for (std::size_t y = 0; y < ref.height(); ++y) {
            for (std::size_t x = 0; x < ref.width(); ++x) {
                const auto wr = dwt1d(pixel_series(ref, c, y, x), levels);
                const auto wp = dwt1d(pixel_series(pred, c, y, x), levels);
                for (std::size_t j = 0; j < levels; ++j)
                    for (std::size_t k = 0; k < wr.detail[j].size(); ++k)
                        sum += std::abs(wr.detail[j][k] - wp.detail[j][k]);
                for (std::size_t k = 0; k < wr.approx.size(); ++k)
                    sum += std::abs(wr.approx[k] - wp.approx[k]);
            }
        }
    }
    const std::size_t per_series = coeff_count(ref.entries(), levels);
    const std::size_t total = per_series * ref.entry_size();
    return sum / static_cast<double>(total);
}

MotionVectorSequence global_loss_grad(const MotionVectorSequence& ref,
                                      const MotionVectorSequence& pred,
                                      std::size_t levels) {
    if (!ref.same_shape(pred))
        throw value_error("global_loss_grad: shape mismatch");
    check_levels(levels, ref.entries(), "global_loss_grad");
    const std::size_t length = ref.entries();
    const double inv_total =
        1.0 / static_cast<double>(coeff_count(length, levels) * ref.entry_size());

    MotionVectorSequence grad(ref.entries(), ref.channels(), ref.height(), ref.width());
    for (std::size_t c = 0; c < ref.channels(); ++c) {
        for (std::size_t y = 0; y < ref.height(); ++y) {
            for (std::size_t x = 0; x < ref.width(); ++x) {
                const auto wr = dwt1d(pixel_series(ref, c, y, x), levels);
                const auto wp = dwt1d(pixel_series(pred, c, y, x), levels);
                // Coefficient-space subgradient, then the analysis adjoint:
                // per level the padded filter bank is orthonormal (adjoint =
                // synthesis); the replicate-pad adjoint folds the padded
                // slot's gradient back onto the last sample.
                std::vector<double> g(wp.approx.size());
                for (std::size_t k = 0; k < g.size(); ++k)
                    g[k] = sign_of(wp.approx[k] - wr.approx[k]) * inv_total;
                for (std::size_t j = levels; j >= 1; --j) {
                    const auto& dr = wr.detail[j - 1];
                    const auto& dp = wp.detail[j - 1];
                    std::vector<double> up(2 * dp.size());
                    for (std::size_t k = 0; k < dp.size(); ++k) {
                        const double gd = sign_of(dp[k] - dr[k]) * inv_total;
                        up[2 * k] = (g[k] - gd) * kInvSqrt2;
                        up[2 * k + 1] = (g[k] + gd) * kInvSqrt2;
                    }
                    const std::size_t len = level_length(length, j);
                    if (up.size() > len) {
                        up[len - 1] += up[len];
                        up.resize(len);
                    }
                    g = std::move(up);
                }
                for (std::size_t n = 0; n < length; ++n) grad.at(n, c, y, x) = g[n];
            }
        }
    }
    return grad;
}

void write_wavelet_csv(std::ostream& out, const MotionVectorSequence& m,
                       std::size_t levels) {
    out << "pixel,level,band,k,value\n";
    std::size_t pixel = 0;
    for (std::size_t c = 0; c < m.channels(); ++c) {
        for (std::size_t y = 0; y < m.height(); ++y) {
            for (std::size_t x = 0; x < m.width(); ++x, ++pixel) {
                const auto w = dwt1d(pixel_series(m, c, y, x), levels);
                for (std::size_t j = 0; j < levels; ++j)
                    for (std::size_t k = 0; k < w.detail[j].size(); ++k)
                        out << pixel << ',' << (j + 1) << ",detail," << k << ','
                            << format_double(w.detail[j][k]) << '\n';
                for (std::size_t k = 0; k < w.approx.size(); ++k)
                    out << pixel << ',' << levels << ",approx," << k << ','
                        << format_double(w.approx[k]) << '\n';
            }
        }
    }
}

} // namespace sma
