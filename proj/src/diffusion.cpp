#include "sma/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sma {

namespace {

void check_t(std::size_t t, const NoiseSchedule& s, const char* what) {
    if (t < 1 || t > s.steps())
        throw value_error(std::string(what) + ": timestep " + std::to_string(t) +
                          " outside 1.." + std::to_string(s.steps()));
}

void check_same_shape(const VideoTensor& a, const VideoTensor& b, const char* what) {
    if (!a.same_shape(b))
        throw value_error(std::string(what) + ": shape mismatch");
}

} // namespace

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
    if (betas.empty())
        throw value_error("schedule needs at least one step");
    NoiseSchedule s;
    s.beta_ = std::move(betas);
    s.alpha_.resize(s.beta_.size());
    s.alpha_bar_.resize(s.beta_.size());
    s.beta_tilde_.resize(s.beta_.size());
    double prod = 1.0;
    double prev_beta = 0.0;
    double prev_bar = 1.0; // alpha_bar(0)
    for (std::size_t i = 0; i < s.beta_.size(); ++i) {
        const double b = s.beta_[i];
        if (!(b > 0.0 && b < 1.0))
            throw value_error("beta values must lie in (0, 1)");
        if (b < prev_beta)
            throw value_error("beta values must be non-decreasing");
        prev_beta = b;
        s.alpha_[i] = 1.0 - b;
        prod *= s.alpha_[i];
        s.alpha_bar_[i] = prod;
        s.beta_tilde_[i] = (1.0 - prev_bar) / (1.0 - prod) * b;
        prev_bar = prod;
    }
    return s;
}

NoiseSchedule make_schedule(std::size_t steps, ScheduleKind kind) {
    if (steps == 0)
        throw value_error("make_schedule: steps must be at least 1");
    (void)kind; // single kind for now
    constexpr double kBetaStart = 1e-4;
    constexpr double kBetaEnd = 2e-2;
    std::vector<double> betas(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        betas[i] = steps == 1 ? kBetaStart
                              : kBetaStart + (kBetaEnd - kBetaStart) *
                                                 static_cast<double>(i) /
                                                 static_cast<double>(steps - 1);
    }
    return NoiseSchedule::from_betas(std::move(betas));
}

OracleDenoiser::OracleDenoiser(VideoTensor clean, const NoiseSchedule& schedule)
    : clean_(std::move(clean)), schedule_(&schedule) {}

VideoTensor OracleDenoiser::predict_noise(const VideoTensor& noisy, std::size_t t) const {
    check_t(t, *schedule_, "OracleDenoiser");
    check_same_shape(noisy, clean_, "OracleDenoiser");
    const double abar = schedule_->alpha_bar(t);
    const double sa = std::sqrt(abar);
    const double sn = std::sqrt(1.0 - abar);
    VideoTensor eps = noisy;
    for (std::size_t i = 0; i < eps.size(); ++i)
        eps.values()[i] = (noisy.values()[i] - sa * clean_.values()[i]) / sn;
    return eps;
}

BiasedOracleDenoiser::BiasedOracleDenoiser(VideoTensor clean, const NoiseSchedule& schedule,
                                           double bias)
    : base_(std::move(clean), schedule), bias_(bias) {}

VideoTensor BiasedOracleDenoiser::predict_noise(const VideoTensor& noisy,
                                                std::size_t t) const {
    VideoTensor eps = base_.predict_noise(noisy, t);
    for (double& v : eps.values()) v += bias_;
    return eps;
}

VideoTensor ZeroDenoiser::predict_noise(const VideoTensor& noisy, std::size_t) const {
    VideoTensor eps = noisy;
    std::fill(eps.values().begin(), eps.values().end(), 0.0);
    return eps;
}

VideoTensor forward_sample(const VideoTensor& v0, std::size_t t, const VideoTensor& eps,
                           const NoiseSchedule& s) {
    check_t(t, s, "forward_sample");
    check_same_shape(v0, eps, "forward_sample");
    const double sa = std::sqrt(s.alpha_bar(t));
    const double sn = std::sqrt(1.0 - s.alpha_bar(t));
    VideoTensor out = v0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = sa * v0.values()[i] + sn * eps.values()[i];
    out.ensure_finite("forward_sample");
    return out;
}

MotionVectorSequence residual_forward_sample(const MotionVectorSequence& dv0, std::size_t t,
                                             const MotionVectorSequence& eps_lo,
                                             const MotionVectorSequence& eps_hi,
                                             const NoiseSchedule& s) {
    check_t(t, s, "residual_forward_sample");
    if (!dv0.same_shape(eps_lo) || !dv0.same_shape(eps_hi))
        throw value_error("residual_forward_sample: shape mismatch");
    const double sa = std::sqrt(s.alpha_bar(t));
    const double sn = std::sqrt(1.0 - s.alpha_bar(t));
    MotionVectorSequence out = dv0;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = sa * dv0.values()[i] +
                          sn * (eps_hi.values()[i] - eps_lo.values()[i]);
    out.ensure_finite("residual_forward_sample");
    return out;
}

VideoTensor tweedie_estimate(const VideoTensor& vt, std::size_t t,
                             const VideoTensor& eps_pred, const NoiseSchedule& s) {
    check_t(t, s, "tweedie_estimate");
    check_same_shape(vt, eps_pred, "tweedie_estimate");
    const double abar = s.alpha_bar(t);
    if (abar <= 0.0)
        throw value_error("tweedie_estimate: alpha_bar must be positive");
    const double sa = std::sqrt(abar);
    const double sn = std::sqrt(1.0 - abar);
    VideoTensor out = vt;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = (vt.values()[i] - sn * eps_pred.values()[i]) / sa;
    out.ensure_finite("tweedie_estimate");
    return out;
}

MotionVectorSequence denoised_motion_vectors(const VideoTensor& vt, std::size_t t,
                                             const Denoiser& d, const NoiseSchedule& s) {
    return motion_vectors(tweedie_estimate(vt, t, d.predict_noise(vt, t), s));
}

VideoTensor ancestral_step(const VideoTensor& xt, std::size_t t, const VideoTensor& eps_pred,
                           const VideoTensor& noise, const NoiseSchedule& s) {
    check_t(t, s, "ancestral_step");
    check_same_shape(xt, eps_pred, "ancestral_step");
    check_same_shape(xt, noise, "ancestral_step");
    const double inv_sa = 1.0 / std::sqrt(s.alpha(t));
    const double shrink = (1.0 - s.alpha(t)) / std::sqrt(1.0 - s.alpha_bar(t));
    const double bt = s.beta_tilde(t);
    VideoTensor out = xt;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = inv_sa * (xt.values()[i] - shrink * eps_pred.values()[i]) +
                          bt * noise.values()[i];
    out.ensure_finite("ancestral_step");
    return out;
}

VideoTensor ddim_step(const VideoTensor& xt, std::size_t t, std::size_t t_prev,
                      const VideoTensor& eps_pred, double eta, const VideoTensor& noise,
                      const NoiseSchedule& s) {
    check_t(t, s, "ddim_step");
    if (t_prev < 1 || t_prev >= t)
        throw value_error("ddim_step: need 1 <= t_prev < t");
    if (eta < 0.0 || eta > 1.0)
        throw value_error("ddim_step: eta must lie in [0, 1]");
    check_same_shape(xt, eps_pred, "ddim_step");
    check_same_shape(xt, noise, "ddim_step");
    const double bt = s.beta_tilde(t);
    const double abar_prev = s.alpha_bar(t_prev);
    const double radicand = 1.0 - abar_prev - eta * eta * bt * bt;
    if (radicand < 0.0)
        throw value_error("ddim_step: eta too large for this step (negative radicand)");
    const double sa_prev = std::sqrt(abar_prev);
    const double dir = std::sqrt(radicand);
    const VideoTensor x0 = tweedie_estimate(xt, t, eps_pred, s);
    VideoTensor out = xt;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values()[i] = sa_prev * x0.values()[i] + dir * eps_pred.values()[i] +
                          eta * bt * noise.values()[i];
    out.ensure_finite("ddim_step");
    return out;
}

VideoTensor ddim_roundtrip(const VideoTensor& v0, const VideoTensor& terminal_noise,
                           std::size_t num_steps, const Denoiser& d, const NoiseSchedule& s) {
    if (num_steps < 1)
        throw value_error("ddim_roundtrip: need at least one step");
    const std::size_t T = s.steps();
    // Ascending timestep grid from 1 to T, rounded and deduplicated.
    std::vector<std::size_t> grid;
    for (std::size_t i = 0; i < num_steps; ++i) {
        const double frac = num_steps == 1 ? 1.0
                                           : static_cast<double>(i) /
                                                 static_cast<double>(num_steps - 1);
        const auto t = static_cast<std::size_t>(
            std::llround(1.0 + frac * static_cast<double>(T - 1)));
        if (grid.empty() || t > grid.back()) grid.push_back(t);
    }
    VideoTensor x = forward_sample(v0, T, terminal_noise, s);
    VideoTensor zero = terminal_noise;
    std::fill(zero.values().begin(), zero.values().end(), 0.0);
    for (std::size_t i = grid.size(); i-- > 1;) {
        const std::size_t t = grid[i];
        const std::size_t t_prev = grid[i - 1];
        x = ddim_step(x, t, t_prev, d.predict_noise(x, t), 0.0, zero, s);
    }
    return tweedie_estimate(x, grid.front(), d.predict_noise(x, grid.front()), s);
}

} // namespace sma
