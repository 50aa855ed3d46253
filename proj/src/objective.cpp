#include "sma/objective.hpp"

#include <cmath>

#include "sma/json_writer.hpp"

namespace sma {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_shapes(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                  const char* what) {
    if (!ref.same_shape(pred))
        throw value_error(std::string(what) + ": shape mismatch");
}

double entry_norm_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

double entry_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

std::string align_kind_name(AlignKind kind) {
    switch (kind) {
        case AlignKind::mse: return "mse";
        case AlignKind::l1: return "l1";
        case AlignKind::cosine: return "cosine";
    }
    return "mse";
}

AlignKind parse_align_kind(const std::string& name) {
    if (name == "mse") return AlignKind::mse;
    if (name == "l1") return AlignKind::l1;
    if (name == "cosine") return AlignKind::cosine;
    throw value_error("unknown align kind: " + name);
}

double align_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                  AlignKind kind) {
    check_shapes(ref, pred, "align_loss");
    const auto& r = ref.values();
    const auto& p = pred.values();
    switch (kind) {
        case AlignKind::mse: {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double d = p[i] - r[i];
                s += d * d;
            }
            return s / static_cast<double>(r.size());
        }
        case AlignKind::l1: {
            double s = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) s += std::abs(p[i] - r[i]);
            return s / static_cast<double>(r.size());
        }
        case AlignKind::cosine: {
            double s = 0.0;
            for (std::size_t n = 0; n < ref.entries(); ++n) {
                const auto a = ref.entry(n);
                const auto b = pred.entry(n);
                const double na2 = entry_norm_sq(a);
                const double nb2 = entry_norm_sq(b);
                if (na2 == 0.0 && nb2 == 0.0) continue; // identical zero entries
                if (na2 == 0.0 || nb2 == 0.0) {
                    s += 1.0; // similarity taken as 0
                    continue;
                }
                // sqrt(na2 * nb2) makes identical entries cancel exactly.
                s += std::max(0.0, 1.0 - entry_dot(a, b) / std::sqrt(na2 * nb2));
            }
            return s / static_cast<double>(ref.entries());
        }
    }
    throw value_error("align_loss: unknown kind");
}

MotionVectorSequence align_loss_grad(const MotionVectorSequence& ref,
                                     const MotionVectorSequence& pred, AlignKind kind) {
    check_shapes(ref, pred, "align_loss_grad");
    MotionVectorSequence grad(ref.entries(), ref.channels(), ref.height(), ref.width());
    const auto& r = ref.values();
    const auto& p = pred.values();
    auto& g = grad.values();
    switch (kind) {
        case AlignKind::mse: {
            const double inv = 2.0 / static_cast<double>(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) g[i] = inv * (p[i] - r[i]);
            return grad;
        }
        case AlignKind::l1: {
            const double inv = 1.0 / static_cast<double>(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) g[i] = inv * sign_of(p[i] - r[i]);
            return grad;
        }
        case AlignKind::cosine: {
            const double inv = 1.0 / static_cast<double>(ref.entries());
            for (std::size_t n = 0; n < ref.entries(); ++n) {
                const auto a = ref.entry(n);
                const auto b = pred.entry(n);
                auto gn = grad.entry(n);
                const double na2 = entry_norm_sq(a);
                const double nb2 = entry_norm_sq(b);
                if (na2 == 0.0 || nb2 == 0.0) continue; // constant term, zero subgradient
                const double denom = std::sqrt(na2 * nb2);
                const double cs = entry_dot(a, b) / denom;
                for (std::size_t i = 0; i < b.size(); ++i)
                    gn[i] = -inv * (a[i] / denom - cs * b[i] / nb2);
            }
            return grad;
        }
    }
    throw value_error("align_loss_grad: unknown kind");
}

std::size_t resolve_levels(const SmaConfig& cfg, std::size_t entry_count) {
    return cfg.levels == kAutoLevels ? auto_levels(entry_count) : cfg.levels;
}

LossBreakdown sma_loss(const MotionVectorSequence& ref, const MotionVectorSequence& pred,
                       const SmaConfig& cfg) {
    check_shapes(ref, pred, "sma_loss");
    if (ref.entries() < 2)
        throw value_error("sma_loss: wavelet term requires at least 2 motion frames");
    const std::size_t levels = resolve_levels(cfg, ref.entries());
    const WeightMap weight = freq_weight(ref.height(), ref.width(), cfg.delta);
    LossBreakdown b;
    b.l_align = align_loss(ref, pred, cfg.align);
    b.l_global = global_loss(ref, pred, levels);
    const LocalLosses local = local_spectral_losses(ref, pred, weight);
    b.l_local_amp = local.amplitude;
    b.l_local_phase = local.phase;
    b.total = b.l_align + cfg.lambda_g * b.l_global +
              cfg.lambda_l * (b.l_local_amp + b.l_local_phase);
    if (!std::isfinite(b.total))
        throw numeric_error("sma_loss: non-finite total");
    return b;
}

MotionVectorSequence sma_grad(const MotionVectorSequence& ref,
                              const MotionVectorSequence& pred, const SmaConfig& cfg) {
    check_shapes(ref, pred, "sma_grad");
    if (ref.entries() < 2)
        throw value_error("sma_grad: wavelet term requires at least 2 motion frames");
    const std::size_t levels = resolve_levels(cfg, ref.entries());
    const WeightMap weight = freq_weight(ref.height(), ref.width(), cfg.delta);
    MotionVectorSequence grad = align_loss_grad(ref, pred, cfg.align);
    const MotionVectorSequence gg = global_loss_grad(ref, pred, levels);
    const MotionVectorSequence gl = local_loss_grad(ref, pred, weight);
    for (std::size_t i = 0; i < grad.size(); ++i)
        grad.values()[i] += cfg.lambda_g * gg.values()[i] + cfg.lambda_l * gl.values()[i];
    grad.ensure_finite("sma_grad");
    return grad;
}

LossBreakdown feature_sma_loss(const VideoTensor& source, const VideoTensor& target,
                               const FeatureMap& features, const SmaConfig& cfg) {
    if (!features)
        throw value_error("feature_sma_loss: empty feature map");
    const VideoTensor fs = features(source);
    const VideoTensor ft = features(target);
    if (fs.frames() != source.frames() || ft.frames() != target.frames())
        throw value_error("feature_sma_loss: feature map must preserve the frame count");
    if (!fs.same_shape(ft))
        throw value_error("feature_sma_loss: feature shapes are incompatible");
    return sma_loss(motion_vectors(fs), motion_vectors(ft), cfg);
}

VideoTensor average_pool(const VideoTensor& v, std::size_t factor) {
    if (factor < 1)
        throw value_error("average_pool: factor must be at least 1");
    if (v.height() % factor != 0 || v.width() % factor != 0)
        throw value_error("average_pool: dimensions must be divisible by the factor");
    const std::size_t oh = v.height() / factor;
    const std::size_t ow = v.width() / factor;
    VideoTensor out(v.frames(), v.channels(), oh, ow);
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (std::size_t n = 0; n < v.frames(); ++n)
        for (std::size_t c = 0; c < v.channels(); ++c)
            for (std::size_t y = 0; y < oh; ++y)
                for (std::size_t x = 0; x < ow; ++x) {
                    double s = 0.0;
                    for (std::size_t dy = 0; dy < factor; ++dy)
                        for (std::size_t dx = 0; dx < factor; ++dx)
                            s += v.at(n, c, y * factor + dy, x * factor + dx);
                    out.at(n, c, y, x) = s * inv;
                }
    return out;
}

std::string to_json(const LossBreakdown& b, const SmaConfig& cfg,
                    std::size_t resolved_levels) {
    JsonWriter j;
    j.begin_object();
    j.key("l_align").value(b.l_align);
    j.key("l_global").value(b.l_global);
    j.key("l_local_amp").value(b.l_local_amp);
    j.key("l_local_phase").value(b.l_local_phase);
    j.key("total").value(b.total);
    j.key("config").begin_object();
    j.key("lambda_g").value(cfg.lambda_g);
    j.key("lambda_l").value(cfg.lambda_l);
    j.key("delta").value(cfg.delta);
    j.key("levels").value(static_cast<std::uint64_t>(resolved_levels));
    j.key("align").value(align_kind_name(cfg.align));
    j.end_object();
    j.end_object();
    return j.str();
}

} // namespace sma
