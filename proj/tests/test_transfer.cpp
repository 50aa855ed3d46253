#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sma/fourier.hpp"
#include "sma/noise.hpp"
#include "sma/synth.hpp"
#include "sma/transfer.hpp"

using namespace sma;

namespace {

// Exhaustive circular-shift search: argmin over all (dy, dx) of the SSD
// between frame2 and the shifted frame1. Independent of the FFT path.
Displacement brute_shift(const VideoTensor& v, std::size_t n) {
    const std::size_t h = v.height(), w = v.width();
    double best = 1e300;
    long best_dy = 0, best_dx = 0;
    for (long dy = 0; dy < static_cast<long>(h); ++dy)
        for (long dx = 0; dx < static_cast<long>(w); ++dx) {
            double ssd = 0.0;
            for (std::size_t y = 0; y < h; ++y)
                for (std::size_t x = 0; x < w; ++x) {
                    const std::size_t sy = (y + h - dy % h) % h;
                    const std::size_t sx = (x + w - dx % w) % w;
                    const double d =
                        v.at(n + 1, 0, y, x) - v.at(n, 0, sy, sx);
                    ssd += d * d;
                }
            if (ssd < best) {
                best = ssd;
                best_dy = dy;
                best_dx = dx;
            }
        }
    auto to_signed = [](long raw, std::size_t size) {
        return raw <= static_cast<long>(size / 2)
                   ? static_cast<double>(raw)
                   : static_cast<double>(raw) - static_cast<double>(size);
    };
    return {to_signed(best_dx, w), to_signed(best_dy, h)};
}

} // namespace

TEST_SUITE("transfer") {

TEST_CASE("synthetic translate-square is a pure circular shift") {
    SynthSpec spec;
    spec.frames = 8;
    spec.size = 32;
    spec.dx = 2;
    spec.dy = 0;
    const auto made = synth_video(spec);
    CHECK(made.velocity_dx == 2.0);
    CHECK(made.velocity_dy == 0.0);
    const auto& v = made.video;
    for (std::size_t n = 0; n + 1 < 8; ++n)
        for (std::size_t y = 0; y < 32; ++y)
            for (std::size_t x = 0; x < 32; ++x)
                CHECK(v.at(n + 1, 0, y, x) ==
                      doctest::Approx(v.at(n, 0, y, (x + 30) % 32)).epsilon(1e-12));
}

TEST_CASE("flat background keeps motion at the object edges") {
    SynthSpec spec;
    spec.frames = 4;
    spec.size = 16;
    spec.object_size = 4;
    const auto m = motion_vectors(synth_video(spec).video);
    std::size_t nonzero = 0;
    for (double v : m.values())
        if (v != 0.0) ++nonzero;
    // Two object_size x |dx| strips per transition.
    CHECK(nonzero == 3 * 2 * 4 * 2);
}

TEST_CASE("fence artifact concentrates at the highest horizontal frequency") {
    SynthSpec clean_spec;
    clean_spec.frames = 8;
    clean_spec.size = 16;
    clean_spec.seed = 3;
    SynthSpec fence_spec = clean_spec;
    fence_spec.artifact = Artifact::fence;
    fence_spec.artifact_strength = 0.3;
    const auto clean = motion_vectors(synth_video(clean_spec).video);
    const auto fenced = motion_vectors(synth_video(fence_spec).video);
    // Stripes vary along x with period 2: raw frequency (0, W/2), which the
    // centered grid places at (H/2, 0).
    double clean_peak = 0.0, fenced_peak = 0.0;
    for (std::size_t n = 0; n < clean.entries(); ++n) {
        clean_peak += dft2(clean.entry(n), 16, 16).amplitude(8, 0);
        fenced_peak += dft2(fenced.entry(n), 16, 16).amplitude(8, 0);
    }
    CHECK(fenced_peak > clean_peak + 100.0);
    CHECK(hf_energy_ratio(fenced, clean) > 1.0);
}

TEST_CASE("synth validation") {
    SynthSpec spec;
    spec.object_size = 99;
    spec.size = 32;
    CHECK_THROWS_AS(synth_video(spec), value_error);
    SynthSpec strength;
    strength.artifact = Artifact::fence;
    strength.artifact_strength = 0.0;
    CHECK_THROWS_AS(synth_video(strength), value_error);
}

TEST_CASE("phase correlation displacement") {
    SUBCASE("clean translations, against the exhaustive search") {
        for (const auto& [dx, dy] : {std::pair{2, 0}, std::pair{0, -1}, std::pair{-3, 2}}) {
            SynthSpec spec;
            spec.frames = 4;
            spec.size = 32;
            spec.dx = dx;
            spec.dy = dy;
            spec.background = Background::flat;
            const auto v = synth_video(spec).video;
            const auto est = estimate_displacement(v);
            REQUIRE(est.size() == 3);
            for (std::size_t n = 0; n < est.size(); ++n) {
                const auto oracle = brute_shift(v, n);
                CHECK(est[n].dx == oracle.dx);
                CHECK(est[n].dy == oracle.dy);
                CHECK(est[n].dx == static_cast<double>(dx));
                CHECK(est[n].dy == static_cast<double>(dy));
            }
        }
    }
    SUBCASE("static textured video reads zero displacement") {
        SynthSpec spec;
        spec.frames = 4;
        spec.size = 16;
        spec.dx = 0;
        spec.dy = 0;
        spec.background = Background::texture;
        spec.seed = 5;
        const auto v = synth_video(spec).video;
        for (const auto& d : estimate_displacement(v)) {
            CHECK(d.dx == 0.0);
            CHECK(d.dy == 0.0);
        }
    }
    SUBCASE("constant frames are degenerate") {
        VideoTensor flat(3, 1, 8, 8);
        for (double& v : flat.values()) v = 0.5;
        CHECK_THROWS_AS(estimate_displacement(flat), value_error);
    }
}

TEST_CASE("hf energy ratio") {
    SynthSpec spec;
    spec.frames = 6;
    spec.size = 16;
    const auto m = motion_vectors(synth_video(spec).video);
    SUBCASE("identity is exactly 1") {
        CHECK(hf_energy_ratio(m, m) == 1.0);
    }
    SUBCASE("zero output is exactly 0") {
        MotionVectorSequence zero(m.entries(), 1, 16, 16);
        CHECK(hf_energy_ratio(zero, m) == 0.0);
    }
    SUBCASE("added stripe noise raises the ratio") {
        auto noisy = m;
        for (std::size_t n = 0; n < noisy.entries(); ++n) {
            auto e = noisy.entry(n);
            for (std::size_t y = 0; y < 16; ++y)
                for (std::size_t x = 0; x < 16; ++x)
                    e[y * 16 + x] += (x % 2 == 0 ? 0.2 : -0.2);
        }
        CHECK(hf_energy_ratio(noisy, m) > 1.0);
    }
}

TEST_CASE("reversal discrimination") {
    // Constant-velocity pattern: amplitude spectra are sign-blind while the
    // temporal wavelet coefficients flip sign.
    SynthSpec spec;
    spec.frames = 8;
    spec.size = 16;
    const auto m = motion_vectors(synth_video(spec).video);
    auto reversed = m;
    for (double& v : reversed.values()) v = -v;
    const auto weight = freq_weight(16, 16, 0.05);
    CHECK(local_amp_loss(m, reversed, weight) == 0.0);
    MotionVectorSequence zero(m.entries(), 1, 16, 16);
    const double vs_reversed = global_loss(m, reversed, 3);
    const double vs_zero = global_loss(m, zero, 3);
    CHECK(vs_reversed > 0.1 * vs_zero);
    CHECK(vs_reversed == doctest::Approx(2.0 * vs_zero).epsilon(1e-12));
}

TEST_CASE("transfer fixed point: copy init on the source") {
    SynthSpec spec;
    spec.frames = 6;
    spec.size = 16;
    const auto made = synth_video(spec);
    TransferConfig cfg;
    cfg.steps = 10;
    cfg.init = InitKind::copy_target;
    cfg.seed = 1;
    const auto result = transfer(made.video, cfg,
                                 Displacement{made.velocity_dx, made.velocity_dy});
    CHECK(result.report.loss_trace.size() == 10);
    CHECK(result.report.loss_trace.front().total == 0.0);
    for (std::size_t i = 0; i < made.video.size(); ++i)
        CHECK(result.output.values()[i] == made.video.values()[i]);
    CHECK(result.report.displacement_error == 0.0);
    CHECK(result.report.hf_energy_ratio == 1.0);
}

TEST_CASE("short run reduces the loss") {
    SynthSpec spec;
    spec.frames = 6;
    spec.size = 16;
    spec.object_size = 5;
    const auto made = synth_video(spec);
    TransferConfig cfg;
    cfg.steps = 60;
    cfg.seed = 2;
    const auto result = transfer(made.video, cfg);
    CHECK(result.report.loss_trace.back().total <
          0.8 * result.report.loss_trace.front().total);
}

TEST_CASE("transfer is deterministic") {
    SynthSpec spec;
    spec.frames = 6;
    spec.size = 16;
    spec.artifact = Artifact::fence;
    spec.artifact_strength = 0.3;
    spec.seed = 9;
    const auto made = synth_video(spec);
    TransferConfig cfg;
    cfg.steps = 25;
    cfg.seed = 77;
    const auto r1 = transfer(made.video, cfg);
    const auto r2 = transfer(made.video, cfg);
    CHECK(to_json(r1.report, cfg) == to_json(r2.report, cfg));
    for (std::size_t i = 0; i < r1.output.size(); ++i)
        CHECK(r1.output.values()[i] == r2.output.values()[i]);
}

TEST_CASE("timestep sampling path stays finite and deterministic") {
    SynthSpec spec;
    spec.frames = 4;
    spec.size = 8;
    const auto made = synth_video(spec);
    TransferConfig cfg;
    cfg.steps = 8;
    cfg.seed = 3;
    cfg.timesteps.sample = true;
    cfg.timesteps.t_low = 1;
    cfg.timesteps.t_high = 50;
    const auto r1 = transfer(made.video, cfg);
    const auto r2 = transfer(made.video, cfg);
    CHECK(r1.report.loss_trace.size() == 8);
    for (const auto& b : r1.report.loss_trace) CHECK(std::isfinite(b.total));
    CHECK(to_json(r1.report, cfg) == to_json(r2.report, cfg));

    SUBCASE("range validation") {
        TransferConfig bad = cfg;
        bad.timesteps.t_high = 100000;
        CHECK_THROWS_AS(transfer(made.video, bad), value_error);
    }
}

TEST_CASE("divergence guard aborts with a diagnostic") {
    SynthSpec spec;
    spec.frames = 4;
    spec.size = 8;
    const auto made = synth_video(spec);
    TransferConfig cfg;
    cfg.steps = 3;
    cfg.step_size = 1e200;
    CHECK_THROWS_AS(transfer(made.video, cfg), numeric_error);
}

TEST_CASE("trace CSV format") {
    std::vector<LossBreakdown> trace(2);
    trace[1].total = 0.5;
    std::ostringstream out;
    write_trace_csv(out, trace);
    const std::string csv = out.str();
    CHECK(csv.rfind("step,l_align,l_global,l_local_amp,l_local_phase,total\n", 0) == 0);
    CHECK(csv.find("\n0,0,0,0,0,0\n") != std::string::npos);
    CHECK(csv.find("\n1,0,0,0,0,0.5\n") != std::string::npos);
}

} // TEST_SUITE
