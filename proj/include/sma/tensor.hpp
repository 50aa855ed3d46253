#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sma/errors.hpp"

namespace sma {

/// N x C x H x W frame sequence stored frame-major, channel-major, row-major.
/// All arithmetic is double precision; values are unconstrained apart from
/// being finite.
class VideoTensor {
public:
    VideoTensor(std::size_t frames, std::size_t channels, std::size_t height,
                std::size_t width);
    VideoTensor(std::size_t frames, std::size_t channels, std::size_t height,
                std::size_t width, std::vector<double> values);

    std::size_t frames() const { return frames_; }
    std::size_t channels() const { return channels_; }
    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t frame_size() const { return channels_ * height_ * width_; }
    std::size_t size() const { return values_.size(); }

    double at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
        return values_[index(n, c, y, x)];
    }
    double& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
        return values_[index(n, c, y, x)];
    }

    // n is zero-based here and everywhere in the API.
    std::span<const double> frame(std::size_t n) const {
        return {values_.data() + n * frame_size(), frame_size()};
    }
    std::span<double> frame(std::size_t n) {
        return {values_.data() + n * frame_size(), frame_size()};
    }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool same_shape(const VideoTensor& other) const {
        return frames_ == other.frames_ && channels_ == other.channels_ &&
               height_ == other.height_ && width_ == other.width_;
    }

    // Throws numeric_error if any value is NaN or infinite.
    void ensure_finite(const char* what) const;

private:
    std::size_t index(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
        return ((n * channels_ + c) * height_ + y) * width_ + x;
    }

    std::size_t frames_, channels_, height_, width_;
    std::vector<double> values_;
};

/// Sequence of N-1 frame residuals of a video; entry n holds frame n+1 minus
/// frame n. Shares the layout conventions of VideoTensor.
class MotionVectorSequence {
public:
    MotionVectorSequence(std::size_t entries, std::size_t channels, std::size_t height,
                         std::size_t width);
    MotionVectorSequence(std::size_t entries, std::size_t channels, std::size_t height,
                         std::size_t width, std::vector<double> values);

    std::size_t entries() const { return entries_; }
    std::size_t channels() const { return channels_; }
    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t entry_size() const { return channels_ * height_ * width_; }
    std::size_t size() const { return values_.size(); }

    double at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
        return values_[((n * channels_ + c) * height_ + y) * width_ + x];
    }
    double& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) {
        return values_[((n * channels_ + c) * height_ + y) * width_ + x];
    }

    std::span<const double> entry(std::size_t n) const {
        return {values_.data() + n * entry_size(), entry_size()};
    }
    std::span<double> entry(std::size_t n) {
        return {values_.data() + n * entry_size(), entry_size()};
    }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool same_shape(const MotionVectorSequence& other) const {
        return entries_ == other.entries_ && channels_ == other.channels_ &&
               height_ == other.height_ && width_ == other.width_;
    }

    void ensure_finite(const char* what) const;

private:
    std::size_t entries_, channels_, height_, width_;
    std::vector<double> values_;
};

/// Temporal series of one (c, y, x) location across a motion vector sequence.
using PixelSeries = std::vector<double>;

/// Frame residuals of v: entry n = frame(n+1) - frame(n), n = 0..N-2.
MotionVectorSequence motion_vectors(const VideoTensor& v);

/// The (N-1)-length temporal series of location (c, y, x).
PixelSeries pixel_series(const MotionVectorSequence& m, std::size_t c, std::size_t y,
                         std::size_t x);

} // namespace sma
