#pragma once

#include <cstddef>
#include <vector>

#include "sma/tensor.hpp"

namespace sma {

enum class ScheduleKind { linear };

/// Forward-process noise tables, 1-based in t. alpha_bar(0) is defined as 1
/// so that beta_tilde(1) is well formed.
class NoiseSchedule {
public:
    static NoiseSchedule from_betas(std::vector<double> betas);

    std::size_t steps() const { return beta_.size(); }

    double beta(std::size_t t) const { return beta_.at(t - 1); }
    double alpha(std::size_t t) const { return alpha_.at(t - 1); }
    double alpha_bar(std::size_t t) const { return t == 0 ? 1.0 : alpha_bar_.at(t - 1); }
    double beta_tilde(std::size_t t) const { return beta_tilde_.at(t - 1); }

private:
    NoiseSchedule() = default;

    std::vector<double> beta_, alpha_, alpha_bar_, beta_tilde_;
};

/// Linear kind interpolates beta from 1e-4 to 2e-2 over t = 1..steps.
NoiseSchedule make_schedule(std::size_t steps, ScheduleKind kind = ScheduleKind::linear);

/// Noise predictor interface: maps a noisy video at step t to the predicted
/// per-element noise of the same shape.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual VideoTensor predict_noise(const VideoTensor& noisy, std::size_t t) const = 0;
};

/// Returns the exact noise that maps its known clean video to the input,
/// (v_t - sqrt(abar_t) v_0) / sqrt(1 - abar_t).
class OracleDenoiser : public Denoiser {
public:
    OracleDenoiser(VideoTensor clean, const NoiseSchedule& schedule);
    VideoTensor predict_noise(const VideoTensor& noisy, std::size_t t) const override;

private:
    VideoTensor clean_;
    const NoiseSchedule* schedule_;
};

/// Oracle plus a constant per-element offset; the offset cancels under frame
/// differencing.
class BiasedOracleDenoiser : public Denoiser {
public:
    BiasedOracleDenoiser(VideoTensor clean, const NoiseSchedule& schedule, double bias);
    VideoTensor predict_noise(const VideoTensor& noisy, std::size_t t) const override;

private:
    OracleDenoiser base_;
    double bias_;
};

class ZeroDenoiser : public Denoiser {
public:
    VideoTensor predict_noise(const VideoTensor& noisy, std::size_t t) const override;
};

/// v_t = sqrt(abar_t) v_0 + sqrt(1 - abar_t) eps.
VideoTensor forward_sample(const VideoTensor& v0, std::size_t t, const VideoTensor& eps,
                           const NoiseSchedule& s);

/// Residual-frame kernel: dv_t = sqrt(abar_t) dv_0 + sqrt(1 - abar_t)(eps_hi - eps_lo).
/// For unit-normal noise pairs the per-coordinate variance is 2(1 - abar_t).
MotionVectorSequence residual_forward_sample(const MotionVectorSequence& dv0, std::size_t t,
                                             const MotionVectorSequence& eps_lo,
                                             const MotionVectorSequence& eps_hi,
                                             const NoiseSchedule& s);

/// Posterior-mean estimate (v_t - sqrt(1 - abar_t) eps_pred) / sqrt(abar_t).
VideoTensor tweedie_estimate(const VideoTensor& vt, std::size_t t,
                             const VideoTensor& eps_pred, const NoiseSchedule& s);

/// motion_vectors of the Tweedie estimate under the given denoiser.
MotionVectorSequence denoised_motion_vectors(const VideoTensor& vt, std::size_t t,
                                             const Denoiser& d, const NoiseSchedule& s);

/// One ancestral reverse step:
/// (x_t - (1-alpha_t)/sqrt(1-abar_t) eps_pred) / sqrt(alpha_t) + beta_tilde_t * noise.
VideoTensor ancestral_step(const VideoTensor& xt, std::size_t t, const VideoTensor& eps_pred,
                           const VideoTensor& noise, const NoiseSchedule& s);

/// One DDIM step from t to t_prev (1 <= t_prev < t):
/// sqrt(abar_prev) x0_hat + sqrt(1 - abar_prev - eta^2 bt^2) eps_pred + eta bt * noise
/// with bt = beta_tilde(t) and x0_hat the Tweedie estimate at t.
VideoTensor ddim_step(const VideoTensor& xt, std::size_t t, std::size_t t_prev,
                      const VideoTensor& eps_pred, double eta, const VideoTensor& noise,
                      const NoiseSchedule& s);

/// Diffuses v0 to t = steps() with the given terminal noise, then runs the
/// deterministic (eta = 0) DDIM ladder down a num_steps timestep grid and a
/// final Tweedie estimate at t = 1. With an oracle denoiser this recovers v0.
VideoTensor ddim_roundtrip(const VideoTensor& v0, const VideoTensor& terminal_noise,
                           std::size_t num_steps, const Denoiser& d, const NoiseSchedule& s);

} // namespace sma
