#include "sma/fourier.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sma/json_writer.hpp"

namespace sma {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// L1 subgradient signs with sign(0) = 0, widened to a dead zone that absorbs
// rounding noise: real frames pin the self-conjugate spectrum cells to phase
// differences within ~1e-13 of 0 or pi, where any sign pick is a valid
// subgradient and zero is the one a central difference reproduces.
constexpr double kSignDeadZone = 1e-9;

double amp_sign(double d) {
    return std::abs(d) <= kSignDeadZone ? 0.0 : sign_of(d);
}

double phase_sign(double d) {
    const double a = std::abs(d);
    if (a <= kSignDeadZone || a >= kPi - kSignDeadZone) return 0.0;
    return sign_of(d);
}

void check_pair(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                const WeightMap& weight, const char* what) {
    if (!ref.same_shape(pred))
        throw value_error(std::string(what) + ": shape mismatch");
    if (weight.height != ref.height() || weight.width != ref.width())
        throw value_error(std::string(what) + ": weight map dimensions mismatch");
}

// Raw <-> centered index maps for one axis.
std::size_t center_index(std::size_t raw, std::size_t n) { return (raw + n / 2) % n; }
std::size_t raw_index(std::size_t centered, std::size_t n) {
    return (centered + n - n / 2) % n;
}

ComplexSpectrum spectrum_of(std::span<const double> frame, std::size_t h, std::size_t w) {
    return dft2(frame, h, w);
}

} // namespace

namespace detail {

void dft2_complex(const std::vector<double>& in_re, const std::vector<double>& in_im,
                  std::vector<double>& out_re, std::vector<double>& out_im,
                  std::size_t height, std::size_t width, bool inverse) {
    const double sgn = inverse ? 1.0 : -1.0;
    std::vector<double> tw_re(width), tw_im(width);
    for (std::size_t m = 0; m < width; ++m) {
        const double ang = sgn * kTwoPi * static_cast<double>(m) / static_cast<double>(width);
        tw_re[m] = std::cos(ang);
        tw_im[m] = std::sin(ang);
    }
    // Row pass.
    std::vector<double> mid_re(height * width), mid_im(height * width);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t b = 0; b < width; ++b) {
            double sr = 0.0, si = 0.0;
            for (std::size_t x = 0; x < width; ++x) {
                const std::size_t m = (b * x) % width;
                const double vr = in_re[y * width + x];
                const double vi = in_im[y * width + x];
                sr += vr * tw_re[m] - vi * tw_im[m];
                si += vr * tw_im[m] + vi * tw_re[m];
            }
            mid_re[y * width + b] = sr;
            mid_im[y * width + b] = si;
        }
    }
    // Column pass.
    std::vector<double> th_re(height), th_im(height);
    for (std::size_t m = 0; m < height; ++m) {
        const double ang = sgn * kTwoPi * static_cast<double>(m) / static_cast<double>(height);
        th_re[m] = std::cos(ang);
        th_im[m] = std::sin(ang);
    }
    out_re.assign(height * width, 0.0);
    out_im.assign(height * width, 0.0);
    for (std::size_t b = 0; b < width; ++b) {
        for (std::size_t a = 0; a < height; ++a) {
            double sr = 0.0, si = 0.0;
            for (std::size_t y = 0; y < height; ++y) {
                const std::size_t m = (a * y) % height;
                const double vr = mid_re[y * width + b];
                const double vi = mid_im[y * width + b];
                sr += vr * th_re[m] - vi * th_im[m];
                si += vr * th_im[m] + vi * th_re[m];
            }
            out_re[a * width + b] = sr;
            out_im[a * width + b] = si;
        }
    }
}

} // namespace detail

double ComplexSpectrum::amplitude(std::size_t a, std::size_t b) const {
    const double r = re[a * width + b];
    const double i = im[a * width + b];
    return std::sqrt(r * r + i * i);
}

double ComplexSpectrum::phase(std::size_t a, std::size_t b) const {
    const double p = std::atan2(im[a * width + b], re[a * width + b]);
    return p == -kPi ? kPi : p;
}

ComplexSpectrum dft2(std::span<const double> frame, std::size_t height, std::size_t width) {
    if (height < 2 || width < 2)
        throw value_error("dft2: frame dimensions must be at least 2x2");
    if (frame.size() != height * width)
        throw value_error("dft2: frame size does not match dimensions");
    for (double v : frame) {
        if (!std::isfinite(v))
            throw value_error("dft2: non-finite input value");
    }
    std::vector<double> in_re(frame.begin(), frame.end());
    std::vector<double> in_im(frame.size(), 0.0);
    std::vector<double> raw_re, raw_im;
    detail::dft2_complex(in_re, in_im, raw_re, raw_im, height, width, false);
    ComplexSpectrum spec;
    spec.height = height;
    spec.width = width;
    spec.centered = true;
    spec.re.resize(height * width);
    spec.im.resize(height * width);
    for (std::size_t a = 0; a < height; ++a) {
        const std::size_t ac = center_index(a, height);
        for (std::size_t b = 0; b < width; ++b) {
            const std::size_t bc = center_index(b, width);
            spec.re[ac * width + bc] = raw_re[a * width + b];
            spec.im[ac * width + bc] = raw_im[a * width + b];
        }
    }
    return spec;
}

std::vector<double> idft2(const ComplexSpectrum& spec) {
    const std::size_t h = spec.height, w = spec.width;
    if (h < 2 || w < 2 || spec.re.size() != h * w || spec.im.size() != h * w)
        throw value_error("idft2: malformed spectrum");
    std::vector<double> raw_re(h * w), raw_im(h * w);
    if (spec.centered) {
        for (std::size_t ac = 0; ac < h; ++ac) {
            const std::size_t a = raw_index(ac, h);
            for (std::size_t bc = 0; bc < w; ++bc) {
                const std::size_t b = raw_index(bc, w);
                raw_re[a * w + b] = spec.re[ac * w + bc];
                raw_im[a * w + b] = spec.im[ac * w + bc];
            }
        }
    } else {
        raw_re = spec.re;
        raw_im = spec.im;
    }
    std::vector<double> out_re, out_im;
    detail::dft2_complex(raw_re, raw_im, out_re, out_im, h, w, true);
    const double norm = 1.0 / static_cast<double>(h * w);
    std::vector<double> frame(h * w);
    for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = out_re[i] * norm;
    return frame;
}

double wrap_phase(double delta) {
    double r = std::remainder(delta, kTwoPi); // in [-pi, pi]
    if (r <= -kPi) r += kTwoPi;
    return r;
}

WeightMap freq_weight(std::size_t height, std::size_t width, double delta) {
    if (height < 2 || width < 2)
        throw value_error("freq_weight: dimensions must be at least 2x2");
    if (!(delta > 0.0))
        throw value_error("freq_weight: delta must be positive");
    WeightMap map;
    map.height = height;
    map.width = width;
    map.delta = delta;
    map.w.assign(height * width, 0.0);
    const double hh = static_cast<double>(height) / 2.0;
    const double hw = static_cast<double>(width) / 2.0;
    const double peak = std::pow(hh * hh + hw * hw, delta);
    for (std::size_t a = 1; a < height; ++a) {
        const double da = static_cast<double>(a) - hh;
        for (std::size_t b = 1; b < width; ++b) {
            const double db = static_cast<double>(b) - hw;
            map.w[a * width + b] = peak - std::pow(da * da + db * db, delta) + 1.0;
        }
    }
    return map;
}

LocalLosses local_spectral_losses(const MotionVectorSequence& ref,
                                  const MotionVectorSequence& pred,
                                  const WeightMap& weight) {
    check_pair(ref, pred, weight, "local_spectral_losses");
    const std::size_t h = ref.height(), w = ref.width();
    double amp_sum = 0.0, phase_sum = 0.0;
    std::size_t defined = 0;
    for (std::size_t n = 0; n < ref.entries(); ++n) {
        for (std::size_t c = 0; c < ref.channels(); ++c) {
            const std::size_t off = c * h * w;
            const auto fr = spectrum_of(ref.entry(n).subspan(off, h * w), h, w);
            const auto fp = spectrum_of(pred.entry(n).subspan(off, h * w), h, w);
            for (std::size_t a = 0; a < h; ++a) {
                for (std::size_t b = 0; b < w; ++b) {
                    const double ar = fr.amplitude(a, b);
                    const double ap = fp.amplitude(a, b);
                    const double wv = weight.at(a, b);
                    amp_sum += wv * std::abs(ar - ap);
                    if (ar >= kMagnitudeEps || ap >= kMagnitudeEps) {
                        ++defined;
                        phase_sum += wv * std::abs(wrap_phase(fr.phase(a, b) - fp.phase(a, b)));
                    }
                }
            }
        }
    }
    LocalLosses out;
    const std::size_t cells = ref.entries() * ref.channels() * h * w;
    out.amplitude = amp_sum / static_cast<double>(cells);
    out.phase = defined == 0 ? 0.0 : phase_sum / static_cast<double>(defined);
    return out;
}

double local_amp_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                      const WeightMap& weight) {
    return local_spectral_losses(ref, pred, weight).amplitude;
}

double local_phase_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                        const WeightMap& weight) {
    return local_spectral_losses(ref, pred, weight).phase;
}

MotionVectorSequence local_loss_grad(const MotionVectorSequence& ref,
                                     const MotionVectorSequence& pred,
                                     const WeightMap& weight) {
    check_pair(ref, pred, weight, "local_loss_grad");
    const std::size_t h = ref.height(), w = ref.width();
    const std::size_t planes = ref.entries() * ref.channels();

    // Spectra are needed twice: once to fix the phase-mean denominator,
    // once for the chain rule.
    std::vector<ComplexSpectrum> specs_r(planes), specs_p(planes);
    std::size_t defined = 0;
    for (std::size_t n = 0; n < ref.entries(); ++n) {
        for (std::size_t c = 0; c < ref.channels(); ++c) {
            const std::size_t plane = n * ref.channels() + c;
            const std::size_t off = c * h * w;
            specs_r[plane] = spectrum_of(ref.entry(n).subspan(off, h * w), h, w);
            specs_p[plane] = spectrum_of(pred.entry(n).subspan(off, h * w), h, w);
            for (std::size_t i = 0; i < h * w; ++i) {
                const auto& fr = specs_r[plane];
                const auto& fp = specs_p[plane];
                const double ar = std::hypot(fr.re[i], fr.im[i]);
                const double ap = std::hypot(fp.re[i], fp.im[i]);
                if (ar >= kMagnitudeEps || ap >= kMagnitudeEps) ++defined;
            }
        }
    }
    const double inv_amp_mean =
        1.0 / static_cast<double>(ref.entries() * ref.channels() * h * w);
    const double inv_phase_mean = defined == 0 ? 0.0 : 1.0 / static_cast<double>(defined);

    MotionVectorSequence grad(ref.entries(), ref.channels(), ref.height(), ref.width());
    std::vector<double> g_re(h * w), g_im(h * w), raw_re(h * w), raw_im(h * w);
    std::vector<double> px_re, px_im;
    for (std::size_t n = 0; n < ref.entries(); ++n) {
        for (std::size_t c = 0; c < ref.channels(); ++c) {
            const std::size_t plane = n * ref.channels() + c;
            const auto& fr = specs_r[plane];
            const auto& fp = specs_p[plane];
            std::fill(g_re.begin(), g_re.end(), 0.0);
            std::fill(g_im.begin(), g_im.end(), 0.0);
            for (std::size_t a = 0; a < h; ++a) {
                for (std::size_t b = 0; b < w; ++b) {
                    const std::size_t i = a * w + b;
                    const double wv = weight.at(a, b);
                    const double rp = fp.re[i], ip = fp.im[i];
                    const double ar = std::hypot(fr.re[i], fr.im[i]);
                    const double ap = std::hypot(rp, ip);
                    const double mag = std::max(ap, kMagnitudeEps);
                    // d|F| / d(Re, Im) = (Re, Im) / |F|
                    const double amp_coef = wv * inv_amp_mean * amp_sign(ap - ar);
                    g_re[i] += amp_coef * rp / mag;
                    g_im[i] += amp_coef * ip / mag;
                    if (ar >= kMagnitudeEps || ap >= kMagnitudeEps) {
                        // d angle / d(Re, Im) = (-Im, Re) / |F|^2; the wrapped
                        // difference differentiates like the raw one a.e.
                        const double d = wrap_phase(fr.phase(a, b) - fp.phase(a, b));
                        const double ph_coef = -wv * inv_phase_mean * phase_sign(d);
                        g_re[i] += ph_coef * (-ip) / (mag * mag);
                        g_im[i] += ph_coef * rp / (mag * mag);
                    }
                }
            }
            // Pull back: pixel gradient is the real part of the unnormalized
            // adjoint transform of the coefficient-space gradient.
            for (std::size_t ac = 0; ac < h; ++ac) {
                const std::size_t a = raw_index(ac, h);
                for (std::size_t bc = 0; bc < w; ++bc) {
                    const std::size_t b = raw_index(bc, w);
                    raw_re[a * w + b] = g_re[ac * w + bc];
                    raw_im[a * w + b] = g_im[ac * w + bc];
                }
            }
            detail::dft2_complex(raw_re, raw_im, px_re, px_im, h, w, true);
            auto out = grad.entry(n).subspan(c * h * w, h * w);
            for (std::size_t i = 0; i < h * w; ++i) out[i] += px_re[i];
        }
    }
    return grad;
}

void write_spectrum_csv(std::ostream& out, const MotionVectorSequence& m,
                        std::size_t channel) {
    if (channel >= m.channels())
        throw value_error("write_spectrum_csv: channel out of range");
    out << "frame,a,b,amplitude,phase\n";
    const std::size_t h = m.height(), w = m.width();
    for (std::size_t n = 0; n < m.entries(); ++n) {
        const auto spec = dft2(m.entry(n).subspan(channel * h * w, h * w), h, w);
        for (std::size_t a = 0; a < h; ++a)
            for (std::size_t b = 0; b < w; ++b)
                out << (n + 1) << ',' << a << ',' << b << ','
                    << format_double(spec.amplitude(a, b)) << ','
                    << format_double(spec.phase(a, b)) << '\n';
    }
}

} // namespace sma
