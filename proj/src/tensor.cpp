#include "sma/tensor.hpp"

#include <cmath>
#include <string>

namespace sma {

namespace {

void check_video_dims(std::size_t frames, std::size_t channels, std::size_t height,
                      std::size_t width) {
    if (frames < 2)
        throw value_error("video needs at least 2 frames, got " + std::to_string(frames));
    if (channels < 1 || height < 1 || width < 1)
        throw value_error("video dimensions must be positive");
}

void check_entry_dims(std::size_t entries, std::size_t channels, std::size_t height,
                      std::size_t width) {
    if (entries < 1)
        throw value_error("motion vector sequence needs at least 1 entry");
    if (channels < 1 || height < 1 || width < 1)
        throw value_error("motion vector dimensions must be positive");
}

void check_span_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v))
            throw numeric_error(std::string(what) + ": non-finite value encountered");
    }
}

} // namespace

VideoTensor::VideoTensor(std::size_t frames, std::size_t channels, std::size_t height,
                         std::size_t width)
    : frames_(frames), channels_(channels), height_(height), width_(width),
      values_(frames * channels * height * width, 0.0) {
    check_video_dims(frames, channels, height, width);
}

VideoTensor::VideoTensor(std::size_t frames, std::size_t channels, std::size_t height,
                         std::size_t width, std::vector<double> values)
    : frames_(frames), channels_(channels), height_(height), width_(width),
      values_(std::move(values)) {
    check_video_dims(frames, channels, height, width);
    if (values_.size() != frames * channels * height * width)
        throw value_error("video payload size does not match declared dimensions");
}

void VideoTensor::ensure_finite(const char* what) const {
    check_span_finite(values_, what);
}

MotionVectorSequence::MotionVectorSequence(std::size_t entries, std::size_t channels,
                                           std::size_t height, std::size_t width)
    : entries_(entries), channels_(channels), height_(height), width_(width),
      values_(entries * channels * height * width, 0.0) {
    check_entry_dims(entries, channels, height, width);
}

MotionVectorSequence::MotionVectorSequence(std::size_t entries, std::size_t channels,
                                           std::size_t height, std::size_t width,
                                           std::vector<double> values)
    : entries_(entries), channels_(channels), height_(height), width_(width),
      values_(std::move(values)) {
    check_entry_dims(entries, channels, height, width);
    if (values_.size() != entries * channels * height * width)
        throw value_error("motion vector payload size does not match declared dimensions");
}

void MotionVectorSequence::ensure_finite(const char* what) const {
    check_span_finite(values_, what);
}

MotionVectorSequence motion_vectors(const VideoTensor& v) {
    if (v.frames() < 2)
        throw value_error("motion_vectors: need at least 2 frames");
    MotionVectorSequence m(v.frames() - 1, v.channels(), v.height(), v.width());
    const std::size_t fs = v.frame_size();
    for (std::size_t n = 0; n + 1 < v.frames(); ++n) {
        auto prev = v.frame(n);
        auto next = v.frame(n + 1);
        auto out = m.entry(n);
        for (std::size_t i = 0; i < fs; ++i) out[i] = next[i] - prev[i];
    }
    m.ensure_finite("motion_vectors");
    return m;
}

PixelSeries pixel_series(const MotionVectorSequence& m, std::size_t c, std::size_t y,
                         std::size_t x) {
    if (c >= m.channels() || y >= m.height() || x >= m.width())
        throw value_error("pixel_series: index out of range");
    PixelSeries s(m.entries());
    for (std::size_t n = 0; n < m.entries(); ++n) s[n] = m.at(n, c, y, x);
    return s;
}

} // namespace sma
