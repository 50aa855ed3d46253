#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "sma/finite_diff.hpp"
#include "sma/fourier.hpp"
#include "sma/json_writer.hpp"
#include "sma/noise.hpp"

using namespace sma;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Brute-force double-sum oracle in centered layout, independent of the
// production row-column path.
ComplexSpectrum brute_dft2(const std::vector<double>& frame, std::size_t h, std::size_t w) {
    ComplexSpectrum spec;
    spec.height = h;
    spec.width = w;
    spec.centered = true;
    spec.re.assign(h * w, 0.0);
    spec.im.assign(h * w, 0.0);
    for (std::size_t a = 0; a < h; ++a) {
        for (std::size_t b = 0; b < w; ++b) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t x = 0; x < h; ++x)
                for (std::size_t y = 0; y < w; ++y) {
                    const double ang = -2.0 * kPi *
                                       (static_cast<double>(a * x) / h +
                                        static_cast<double>(b * y) / w);
                    acc += frame[x * w + y] * std::complex<double>(std::cos(ang),
                                                                   std::sin(ang));
                }
            const std::size_t ac = (a + h / 2) % h;
            const std::size_t bc = (b + w / 2) % w;
            spec.re[ac * w + bc] = acc.real();
            spec.im[ac * w + bc] = acc.imag();
        }
    }
    return spec;
}

std::vector<double> random_frame(std::uint64_t seed, std::size_t h, std::size_t w,
                                 std::uint64_t lane = 0) {
    const NoiseStream rng(seed);
    return rng.gaussians(lane, 0, h * w);
}

std::vector<double> circular_shift(const std::vector<double>& f, std::size_t h,
                                   std::size_t w, std::size_t sy, std::size_t sx) {
    std::vector<double> out(h * w);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            out[((y + sy) % h) * w + (x + sx) % w] = f[y * w + x];
    return out;
}

MotionVectorSequence one_frame_pair(std::size_t h, std::size_t w,
                                    std::vector<double> values) {
    return MotionVectorSequence(1, 1, h, w, std::move(values));
}

} // namespace

TEST_SUITE("fourier") {

TEST_CASE("constant frame concentrates at DC") {
    std::vector<double> frame(16, 0.37);
    const auto spec = dft2(frame, 4, 4);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == 2 && b == 2)
                CHECK(spec.amplitude(a, b) == doctest::Approx(16.0 * 0.37).epsilon(1e-12));
            else
                CHECK(spec.amplitude(a, b) <= 1e-12);
        }
}

TEST_CASE("unit impulse is flat in amplitude") {
    std::vector<double> frame(6 * 5, 0.0);
    frame[0] = 1.0;
    const auto spec = dft2(frame, 6, 5);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 5; ++b)
            CHECK(spec.amplitude(a, b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matches the brute-force double sum") {
    const auto frame = random_frame(17, 8, 8);
    const auto fast = dft2(frame, 8, 8);
    const auto slow = brute_dft2(frame, 8, 8);
    for (std::size_t i = 0; i < fast.re.size(); ++i) {
        CHECK(std::abs(fast.re[i] - slow.re[i]) <= 1e-9);
        CHECK(std::abs(fast.im[i] - slow.im[i]) <= 1e-9);
    }
}

TEST_CASE("round trip, Parseval, linearity") {
    const NoiseStream rng(5);
    for (std::size_t h : {std::size_t{8}, std::size_t{9}, std::size_t{16}}) {
        for (std::size_t w : {std::size_t{8}, std::size_t{11}}) {
            const auto frame = rng.gaussians(h, w, h * w);
            const auto spec = dft2(frame, h, w);
            const auto back = idft2(spec);
            double pixel_energy = 0.0, freq_energy = 0.0;
            for (std::size_t i = 0; i < frame.size(); ++i) {
                CHECK(std::abs(back[i] - frame[i]) <= 1e-9);
                pixel_energy += frame[i] * frame[i];
                freq_energy += spec.re[i] * spec.re[i] + spec.im[i] * spec.im[i];
            }
            freq_energy /= static_cast<double>(h * w);
            CHECK(std::abs(freq_energy - pixel_energy) <= 1e-9 * pixel_energy);
        }
    }
    SUBCASE("linearity") {
        const auto f1 = random_frame(1, 8, 8, 0);
        const auto f2 = random_frame(1, 8, 8, 1);
        std::vector<double> mix(64);
        for (std::size_t i = 0; i < 64; ++i) mix[i] = 2.0 * f1[i] - 0.25 * f2[i];
        const auto s1 = dft2(f1, 8, 8);
        const auto s2 = dft2(f2, 8, 8);
        const auto sm = dft2(mix, 8, 8);
        for (std::size_t i = 0; i < 64; ++i) {
            CHECK(std::abs(sm.re[i] - (2.0 * s1.re[i] - 0.25 * s2.re[i])) <= 1e-12 * 64);
            CHECK(std::abs(sm.im[i] - (2.0 * s1.im[i] - 0.25 * s2.im[i])) <= 1e-12 * 64);
        }
    }
    SUBCASE("DC-only spectrum inverts to a constant frame") {
        ComplexSpectrum spec;
        spec.height = 4;
        spec.width = 4;
        spec.re.assign(16, 0.0);
        spec.im.assign(16, 0.0);
        spec.re[2 * 4 + 2] = 16.0 * 0.6; // DC at (2, 2)
        const auto frame = idft2(spec);
        for (double v : frame) CHECK(v == doctest::Approx(0.6).epsilon(1e-12));
    }
    SUBCASE("zero spectrum inverts to zero") {
        ComplexSpectrum spec;
        spec.height = 4;
        spec.width = 4;
        spec.re.assign(16, 0.0);
        spec.im.assign(16, 0.0);
        for (double v : idft2(spec)) CHECK(v == 0.0);
    }
    SUBCASE("non-finite input rejected") {
        std::vector<double> bad(16, 0.0);
        bad[3] = std::nan("");
        CHECK_THROWS_AS(dft2(bad, 4, 4), value_error);
    }
}

TEST_CASE("shift theorem: amplitude invariant, phase linear") {
    const auto frame = random_frame(23, 8, 8);
    const std::size_t sy = 3, sx = 5;
    const auto shifted = circular_shift(frame, 8, 8, sy, sx);
    const auto s0 = dft2(frame, 8, 8);
    const auto s1 = dft2(shifted, 8, 8);
    for (std::size_t ac = 0; ac < 8; ++ac)
        for (std::size_t bc = 0; bc < 8; ++bc) {
            CHECK(std::abs(s1.amplitude(ac, bc) - s0.amplitude(ac, bc)) <= 1e-9);
            // Raw frequencies for the predicted linear phase ramp.
            const std::size_t a = (ac + 8 - 4) % 8;
            const std::size_t b = (bc + 8 - 4) % 8;
            const std::complex<double> ramp =
                std::exp(std::complex<double>(0.0, -2.0 * kPi *
                                                       (static_cast<double>(a * sy) / 8.0 +
                                                        static_cast<double>(b * sx) / 8.0)));
            const std::complex<double> orig(s0.real_at(ac, bc), s0.imag_at(ac, bc));
            const std::complex<double> got(s1.real_at(ac, bc), s1.imag_at(ac, bc));
            CHECK(std::abs(got - orig * ramp) <= 1e-9);
        }
}

TEST_CASE("phase wrapping") {
    CHECK(wrap_phase(6.2) == doctest::Approx(-0.08318531).epsilon(1e-7));
    CHECK(std::abs(wrap_phase(3.1 - (-3.1))) == doctest::Approx(0.08318531).epsilon(1e-7));
    CHECK(wrap_phase(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(wrap_phase(kPi) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(wrap_phase(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("frequency weighting") {
    SUBCASE("worked values at 8x8, delta 0.05") {
        const auto map = freq_weight(8, 8, 0.05);
        CHECK(map.at(4, 4) == doctest::Approx(2.18920712).epsilon(1e-8));
        CHECK(map.at(4, 4) == doctest::Approx(std::pow(32.0, 0.05) + 1.0).epsilon(1e-12));
        CHECK(map.at(1, 1) == doctest::Approx(1.03372394).epsilon(1e-8));
        CHECK(map.at(1, 1) ==
              doctest::Approx(std::pow(32.0, 0.05) - std::pow(18.0, 0.05) + 1.0)
                  .epsilon(1e-12));
    }
    SUBCASE("zero boundary") {
        const auto map = freq_weight(8, 6, 0.05);
        for (std::size_t b = 0; b < 6; ++b) CHECK(map.at(0, b) == 0.0);
        for (std::size_t a = 0; a < 8; ++a) CHECK(map.at(a, 0) == 0.0);
    }
    SUBCASE("maximum at DC") {
        const auto map = freq_weight(8, 8, 0.3);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) CHECK(map.at(a, b) <= map.at(4, 4));
    }
    SUBCASE("monotone prioritization in delta") {
        const auto w1 = freq_weight(8, 8, 0.05);
        const auto w2 = freq_weight(8, 8, 0.10);
        CHECK(w2.at(4, 4) / w2.at(1, 1) > w1.at(4, 4) / w1.at(1, 1));
    }
    SUBCASE("delta must be positive") {
        CHECK_THROWS_AS(freq_weight(8, 8, 0.0), value_error);
        CHECK_THROWS_AS(freq_weight(8, 8, -0.1), value_error);
    }
}

TEST_CASE("local amplitude loss") {
    const auto weight = freq_weight(4, 4, 0.05);
    SUBCASE("identity and sign blindness") {
        const auto m = one_frame_pair(4, 4, random_frame(2, 4, 4));
        CHECK(local_amp_loss(m, m, weight) == 0.0);
        auto neg = m;
        for (double& v : neg.values()) v = -v;
        CHECK(local_amp_loss(m, neg, weight) == 0.0);
    }
    SUBCASE("constant frames differ only at DC") {
        const auto ref = one_frame_pair(4, 4, std::vector<double>(16, 1.0));
        const auto pred = one_frame_pair(4, 4, std::vector<double>(16, 2.0));
        // |16 - 32| at DC, averaged over 16 cells -> w_DC.
        CHECK(local_amp_loss(ref, pred, weight) ==
              doctest::Approx(weight.at(2, 2)).epsilon(1e-12));
    }
    SUBCASE("symmetry") {
        const auto a = one_frame_pair(4, 4, random_frame(3, 4, 4, 0));
        const auto b = one_frame_pair(4, 4, random_frame(3, 4, 4, 1));
        CHECK(local_amp_loss(a, b, weight) == local_amp_loss(b, a, weight));
        CHECK(local_amp_loss(a, b, weight) > 0.0);
    }
}

TEST_CASE("local phase loss") {
    const auto weight = freq_weight(8, 8, 0.05);
    SUBCASE("identity") {
        const auto m = one_frame_pair(8, 8, random_frame(4, 8, 8));
        CHECK(local_phase_loss(m, m, weight) == 0.0);
    }
    SUBCASE("negation flips every defined phase by pi") {
        const auto m = one_frame_pair(8, 8, random_frame(4, 8, 8));
        auto neg = m;
        for (double& v : neg.values()) v = -v;
        // Every defined cell contributes w * pi; the mean equals
        // pi * mean(w over defined cells). Random frames define all cells.
        double wsum = 0.0;
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) wsum += weight.at(a, b);
        CHECK(local_phase_loss(m, neg, weight) ==
              doctest::Approx(kPi * wsum / 64.0).epsilon(1e-9));
    }
    SUBCASE("undefined cells are excluded from the mean") {
        // Constant frames: only DC is defined and its phases agree.
        const auto ref = one_frame_pair(4, 4, std::vector<double>(16, 1.0));
        const auto pred = one_frame_pair(4, 4, std::vector<double>(16, 2.0));
        const auto w44 = freq_weight(4, 4, 0.05);
        CHECK(local_phase_loss(ref, pred, w44) == 0.0);
    }
}

TEST_CASE("local loss gradient") {
    const auto weight = freq_weight(8, 8, 0.05);
    SUBCASE("zero at the minimum") {
        const auto m = one_frame_pair(8, 8, random_frame(6, 8, 8));
        const auto g = local_loss_grad(m, m, weight);
        for (double v : g.values()) CHECK(v == 0.0);
    }
    SUBCASE("matches central finite differences away from kinks") {
        // seed 7, 4 frames -> motion entries of 8x8.
        const NoiseStream rng(7);
        MotionVectorSequence ref(4, 1, 8, 8, rng.gaussians(0, 0, 4 * 64));
        MotionVectorSequence pred(4, 1, 8, 8, rng.gaussians(1, 0, 4 * 64));
        const auto analytic = local_loss_grad(ref, pred, weight);
        auto f = [&](const std::vector<double>& x) {
            MotionVectorSequence cand(4, 1, 8, 8, x);
            const auto l = local_spectral_losses(ref, cand, weight);
            return l.amplitude + l.phase;
        };
        const auto fd = central_gradient(f, pred.values(), 1e-5);
        // A frame is comparable when every cell has usable magnitudes and
        // arguments clear of the kinks.
        // Arguments inside the gradient's rounding-noise dead zone are safe
        // (the self-conjugate cells of a real spectrum always sit there);
        // dangerous is the annulus between the dead zone and the margin.
        auto amp_kink = [](double d) { return d > 1e-9 && d <= 1e-3; };
        auto phase_kink = [](double d) {
            return (d > 1e-9 && d <= 1e-3) || (d >= kPi - 1e-3 && d < kPi - 1e-9);
        };
        std::size_t frames_checked = 0;
        for (std::size_t n = 0; n < 4; ++n) {
            const auto fr = dft2(ref.entry(n), 8, 8);
            const auto fp = dft2(pred.entry(n), 8, 8);
            bool safe = true;
            for (std::size_t a = 0; a < 8 && safe; ++a)
                for (std::size_t b = 0; b < 8; ++b) {
                    const double ar = fr.amplitude(a, b), ap = fp.amplitude(a, b);
                    const double d =
                        std::abs(wrap_phase(fr.phase(a, b) - fp.phase(a, b)));
                    if (std::min(ar, ap) <= 1e-3 || amp_kink(std::abs(ap - ar)) ||
                        phase_kink(d)) {
                        safe = false;
                        break;
                    }
                }
            if (!safe) continue;
            ++frames_checked;
            for (std::size_t i = 0; i < 64; ++i) {
                const double ga = analytic.values()[n * 64 + i];
                const double gf = fd[n * 64 + i];
                const double rel =
                    std::abs(ga - gf) / std::max({std::abs(ga), std::abs(gf), 1e-6});
                CHECK(rel < 1e-4);
            }
        }
        CHECK(frames_checked > 0);
    }
    SUBCASE("boundary-frequency perturbations do not change the loss") {
        const auto ref = one_frame_pair(8, 8, random_frame(8, 8, 8, 0));
        const auto pred = one_frame_pair(8, 8, random_frame(8, 8, 8, 1));
        // Basis frame holding only boundary frequencies (centered a = 0 row).
        ComplexSpectrum basis;
        basis.height = 8;
        basis.width = 8;
        basis.re.assign(64, 0.0);
        basis.im.assign(64, 0.0);
        basis.re[0 * 8 + 3] = 1.0;
        basis.im[0 * 8 + 5] = -2.0;
        basis.re[2 * 8 + 0] = 0.7;
        auto bump = idft2(basis);
        auto perturbed = pred;
        for (std::size_t i = 0; i < 64; ++i) perturbed.values()[i] += 0.125 * bump[i];
        const auto l0 = local_spectral_losses(ref, pred, freq_weight(8, 8, 0.05));
        const auto l1 = local_spectral_losses(ref, perturbed, freq_weight(8, 8, 0.05));
        CHECK(std::abs(l1.amplitude - l0.amplitude) <= 1e-9);
        CHECK(std::abs(l1.phase - l0.phase) <= 1e-9);
    }
}

TEST_CASE("spectrum CSV export") {
    const auto m = one_frame_pair(4, 4, std::vector<double>(16, 1.0));
    std::ostringstream out;
    write_spectrum_csv(out, m);
    const std::string csv = out.str();
    CHECK(csv.rfind("frame,a,b,amplitude,phase\n", 0) == 0);
    CHECK(csv.find("1,2,2," + format_double(16.0)) != std::string::npos);
}

} // TEST_SUITE
