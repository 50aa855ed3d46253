#include "sma/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sma/diffusion.hpp"
#include "sma/fourier.hpp"
#include "sma/json_writer.hpp"
#include "sma/noise.hpp"

namespace sma {

namespace {

// NoiseStream lanes.
constexpr std::uint64_t kLaneInit = 0;
constexpr std::uint64_t kLaneTimestep = 1;
constexpr std::uint64_t kLaneSourceNoise = 2;
constexpr std::uint64_t kLaneTargetNoise = 3;

constexpr double kRandomInitScale = 0.25;

constexpr std::size_t kDiffusionStepsTotal = 1000; // T of the internal schedule

double signed_circular(std::size_t raw, std::size_t n) {
    return raw <= n / 2 ? static_cast<double>(raw)
                        : static_cast<double>(raw) - static_cast<double>(n);
}

VideoTensor gaussian_like(const VideoTensor& shape, const NoiseStream& rng,
                          std::uint64_t lane, std::uint64_t counter) {
    return VideoTensor(shape.frames(), shape.channels(), shape.height(), shape.width(),
                       rng.gaussians(lane, counter, shape.size()));
}

} // namespace

std::string init_kind_name(InitKind k) {
    switch (k) {
        case InitKind::random: return "random";
        case InitKind::static_first_frame: return "static-first-frame";
        case InitKind::copy_target: return "copy-target";
    }
    return "random";
}

InitKind parse_init_kind(const std::string& name) {
    if (name == "random") return InitKind::random;
    if (name == "static" || name == "static-first-frame") return InitKind::static_first_frame;
    if (name == "copy" || name == "copy-target") return InitKind::copy_target;
    throw value_error("unknown init kind: " + name);
}

std::vector<Displacement> estimate_displacement(const VideoTensor& v) {
    const std::size_t h = v.height(), w = v.width();
    std::vector<Displacement> out;
    out.reserve(v.frames() - 1);
    std::vector<double> zero(h * w, 0.0);
    for (std::size_t n = 0; n + 1 < v.frames(); ++n) {
        // Cross-power spectrum accumulated over channels.
        std::vector<double> cross_re(h * w, 0.0), cross_im(h * w, 0.0);
        for (std::size_t c = 0; c < v.channels(); ++c) {
            const std::size_t off = c * h * w;
            std::vector<double> f1(v.frame(n).begin() + off, v.frame(n).begin() + off + h * w);
            std::vector<double> f2(v.frame(n + 1).begin() + off,
                                   v.frame(n + 1).begin() + off + h * w);
            std::vector<double> r1, i1, r2, i2;
            detail::dft2_complex(f1, zero, r1, i1, h, w, false);
            detail::dft2_complex(f2, zero, r2, i2, h, w, false);
            for (std::size_t i = 0; i < h * w; ++i) {
                cross_re[i] += r2[i] * r1[i] + i2[i] * i1[i]; // F2 * conj(F1)
                cross_im[i] += i2[i] * r1[i] - r2[i] * i1[i];
            }
        }
        double max_off_dc = 0.0;
        for (std::size_t i = 1; i < h * w; ++i)
            max_off_dc = std::max(max_off_dc, std::hypot(cross_re[i], cross_im[i]));
        if (max_off_dc < kMagnitudeEps * kMagnitudeEps)
            throw value_error("estimate_displacement: displacement undefined for "
                              "constant frames (transition " + std::to_string(n) + ")");
        for (std::size_t i = 0; i < h * w; ++i) {
            const double mag = std::hypot(cross_re[i], cross_im[i]);
            if (mag < kMagnitudeEps) {
                cross_re[i] = 0.0;
                cross_im[i] = 0.0;
            } else {
                cross_re[i] /= mag;
                cross_im[i] /= mag;
            }
        }
        std::vector<double> surf_re, surf_im;
        detail::dft2_complex(cross_re, cross_im, surf_re, surf_im, h, w, true);
        std::size_t best = 0;
        for (std::size_t i = 1; i < h * w; ++i)
            if (surf_re[i] > surf_re[best]) best = i;
        out.push_back({signed_circular(best % w, w), signed_circular(best / w, h)});
    }
    return out;
}

double hf_energy_ratio(const MotionVectorSequence& out, const MotionVectorSequence& clean) {
    if (!out.same_shape(clean))
        throw value_error("hf_energy_ratio: shape mismatch");
    const std::size_t h = out.height(), w = out.width();
    const double radius = static_cast<double>(std::min(h, w)) / 4.0;
    const double r2 = radius * radius;
    const double cy = static_cast<double>(h) / 2.0;
    const double cx = static_cast<double>(w) / 2.0;
    auto band_energy = [&](const MotionVectorSequence& m) {
        double e = 0.0;
        for (std::size_t n = 0; n < m.entries(); ++n)
            for (std::size_t c = 0; c < m.channels(); ++c) {
                const auto spec = dft2(m.entry(n).subspan(c * h * w, h * w), h, w);
                for (std::size_t a = 0; a < h; ++a)
                    for (std::size_t b = 0; b < w; ++b) {
                        const double da = static_cast<double>(a) - cy;
                        const double db = static_cast<double>(b) - cx;
                        if (da * da + db * db > r2) {
                            const double amp = spec.amplitude(a, b);
                            e += amp * amp;
                        }
                    }
            }
        return e;
    };
    return band_energy(out) / std::max(band_energy(clean), kMagnitudeEps);
}

TransferResult transfer(const VideoTensor& source, const TransferConfig& cfg,
                        const std::optional<Displacement>& true_velocity,
                        const VideoTensor* clean_source) {
    if (cfg.steps < 1)
        throw value_error("transfer: steps must be at least 1");
    if (!(cfg.step_size > 0.0))
        throw value_error("transfer: step_size must be positive");
    if (clean_source != nullptr && !clean_source->same_shape(source))
        throw value_error("transfer: clean_source shape mismatch");

    NoiseStream rng(cfg.seed);
    const std::size_t n_frames = source.frames();
    const std::size_t frame_size = source.frame_size();

    // The optimization variable is the target's motion latent: its frame
    // residuals. Frames are rebuilt by integrating the residuals from the
    // source's first frame. Updating pixels through the differencing adjoint
    // instead would leave the temporal mean of the video invariant, so a
    // static ghost of the initialization could never be optimized away even
    // at a perfect motion match.
    MotionVectorSequence latent(n_frames - 1, source.channels(), source.height(),
                                source.width());
    switch (cfg.init) {
        case InitKind::copy_target:
            latent = motion_vectors(source);
            break;
        case InitKind::static_first_frame:
            break; // zero residuals: every frame equals the anchor
        case InitKind::random: {
            auto noise = rng.gaussians(kLaneInit, 0, latent.size());
            for (std::size_t i = 0; i < latent.size(); ++i)
                latent.values()[i] = kRandomInitScale * noise[i];
            break;
        }
    }
    auto integrate = [&](const MotionVectorSequence& m) {
        VideoTensor video(n_frames, source.channels(), source.height(), source.width());
        auto first = video.frame(0);
        const auto anchor = source.frame(0);
        std::copy(anchor.begin(), anchor.end(), first.begin());
        for (std::size_t n = 1; n < n_frames; ++n) {
            auto dst = video.frame(n);
            const auto prev = video.frame(n - 1);
            const auto step = m.entry(n - 1);
            for (std::size_t i = 0; i < frame_size; ++i) dst[i] = prev[i] + step[i];
        }
        return video;
    };

    NoiseSchedule schedule = make_schedule(kDiffusionStepsTotal);
    if (cfg.timesteps.sample) {
        if (cfg.timesteps.t_low < 1 || cfg.timesteps.t_low > cfg.timesteps.t_high ||
            cfg.timesteps.t_high > schedule.steps())
            throw value_error("transfer: timestep range outside the schedule");
    }
    const OracleDenoiser source_oracle(source, schedule);
    const ZeroDenoiser zero_denoiser;
    const MotionVectorSequence source_motion = motion_vectors(source);

    TransferReport report;
    report.loss_trace.reserve(cfg.steps);
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        MotionVectorSequence m_ref = source_motion;
        MotionVectorSequence m_pred = latent;
        if (cfg.timesteps.sample) {
            // Diffusion estimate path. The source side runs the oracle
            // denoiser, so its Tweedie estimate returns the clean source and
            // m_ref stays the exact source motion. The target side has no
            // oracle; it uses the zero predictor, whose Tweedie estimate is
            // target + sqrt((1-abar)/abar) * eps. That adds a noise term to
            // m_pred but keeps d(m_pred)/d(latent) the identity, so the
            // gradient below applies to the latent unchanged.
            const auto t = static_cast<std::size_t>(rng.uniform_int(
                kLaneTimestep, step, cfg.timesteps.t_low, cfg.timesteps.t_high));
            const VideoTensor eps_src = gaussian_like(source, rng, kLaneSourceNoise, step);
            const VideoTensor eps_tgt = gaussian_like(source, rng, kLaneTargetNoise, step);
            const VideoTensor vt_src = forward_sample(source, t, eps_src, schedule);
            const VideoTensor vt_tgt = forward_sample(integrate(latent), t, eps_tgt, schedule);
            m_ref = denoised_motion_vectors(vt_src, t, source_oracle, schedule);
            m_pred = denoised_motion_vectors(vt_tgt, t, zero_denoiser, schedule);
        }
        LossBreakdown breakdown;
        try {
            breakdown = sma_loss(m_ref, m_pred, cfg.sma);
        } catch (const numeric_error&) {
            throw numeric_error("transfer: loss diverged at step " + std::to_string(step));
        }
        if (!std::isfinite(breakdown.total))
            throw numeric_error("transfer: loss diverged at step " + std::to_string(step));
        report.loss_trace.push_back(breakdown);

        const MotionVectorSequence g = sma_grad(m_ref, m_pred, cfg.sma);
        double norm_sq = 0.0;
        for (double v : g.values()) norm_sq += v * v;
        if (norm_sq > 0.0) {
            // Fixed-length step: the mean-normalized losses make raw gradient
            // magnitudes scale with 1/(coordinate count), so a constant
            // Euclidean step keeps the descent rate independent of resolution.
            const double scale = cfg.step_size / std::sqrt(norm_sq);
            for (std::size_t i = 0; i < latent.size(); ++i)
                latent.values()[i] -= scale * g.values()[i];
            latent.ensure_finite("transfer update");
        }
    }

    VideoTensor target = integrate(latent);
    target.ensure_finite("transfer output");
    const auto estimated = estimate_displacement(target);
    std::vector<Displacement> reference;
    if (true_velocity.has_value()) {
        reference.assign(estimated.size(), *true_velocity);
    } else {
        reference = estimate_displacement(source);
    }
    double err = 0.0;
    for (std::size_t n = 0; n < estimated.size(); ++n)
        err += std::hypot(estimated[n].dx - reference[n].dx,
                          estimated[n].dy - reference[n].dy);
    report.displacement_error = err / static_cast<double>(estimated.size());
    report.hf_energy_ratio = hf_energy_ratio(
        motion_vectors(target),
        motion_vectors(clean_source != nullptr ? *clean_source : source));

    return TransferResult{std::move(target), std::move(report)};
}

void write_trace_csv(std::ostream& out, const std::vector<LossBreakdown>& trace) {
    out << "step,l_align,l_global,l_local_amp,l_local_phase,total\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << format_double(trace[i].l_align) << ','
            << format_double(trace[i].l_global) << ','
            << format_double(trace[i].l_local_amp) << ','
            << format_double(trace[i].l_local_phase) << ','
            << format_double(trace[i].total) << '\n';
}

std::string to_json(const TransferReport& report, const TransferConfig& cfg) {
    JsonWriter j;
    j.begin_object();
    j.key("config").begin_object();
    j.key("steps").value(static_cast<std::uint64_t>(cfg.steps));
    j.key("step_size").value(cfg.step_size);
    j.key("init").value(init_kind_name(cfg.init));
    j.key("seed").value(cfg.seed);
    if (cfg.timesteps.sample) {
        j.key("timesteps").value("uniform:" + std::to_string(cfg.timesteps.t_low) + "," +
                                 std::to_string(cfg.timesteps.t_high));
    } else {
        j.key("timesteps").value("none");
    }
    j.key("sma").begin_object();
    j.key("lambda_g").value(cfg.sma.lambda_g);
    j.key("lambda_l").value(cfg.sma.lambda_l);
    j.key("delta").value(cfg.sma.delta);
    if (cfg.sma.levels == kAutoLevels)
        j.key("levels").value("auto");
    else
        j.key("levels").value(static_cast<std::uint64_t>(cfg.sma.levels));
    j.key("align").value(align_kind_name(cfg.sma.align));
    j.end_object();
    j.end_object();
    j.key("displacement_error").value(report.displacement_error);
    j.key("hf_energy_ratio").value(report.hf_energy_ratio);
    j.key("loss_trace").begin_array();
    for (const auto& b : report.loss_trace) {
        j.begin_object();
        j.key("l_align").value(b.l_align);
        j.key("l_global").value(b.l_global);
        j.key("l_local_amp").value(b.l_local_amp);
        j.key("l_local_phase").value(b.l_local_phase);
        j.key("total").value(b.total);
        j.end_object();
    }
    j.end_array();
    j.end_object();
    return j.str();
}

} // namespace sma
