#pragma once

#include <filesystem>

#include "sma/tensor.hpp"

namespace sma {

// SMAV container, little-endian:
//   bytes 0-3   magic "SMAV"
//   u32         version (1)
//   u32 x 4     N, C, H, W
//   f32 x NCHW  payload in (n, c, y, x) order
//
// load_video also accepts a directory of binary 8-bit PGM (P5) frames taken
// in lexicographic filename order; pixel values are scaled to [0,1] by 1/255.

VideoTensor load_video(const std::filesystem::path& path);

// Payload is rounded to 32-bit floats on write; loading the file back
// reproduces those stored floats bit-exactly.
void save_video(const VideoTensor& v, const std::filesystem::path& path);

} // namespace sma
