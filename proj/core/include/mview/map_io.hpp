#pragma once

#include "mview/score_map.hpp"

#include <filesystem>

namespace mview {

// Score maps travel in two formats, picked by file extension:
//
//  * ".f32"  raw float maps: 16-byte header (8-byte magic "MVIEWF32",
//            uint32 rows, uint32 cols, little-endian) followed by
//            rows*cols row-major float32. Lossless for practical purposes.
//  * ".png"  8- or 16-bit grayscale; values are normalized to [0, 1] on read
//            and clamped/quantized on write.
//
// 8-bit images (gray or RGB) for the augmentation pipeline use PNG only.

enum class PngBits { Eight = 8, Sixteen = 16 };

ScoreMap load_map(const std::filesystem::path& path);
void save_map(const std::filesystem::path& path, const ScoreMap& map,
              PngBits bits = PngBits::Sixteen);

ScoreMap load_map_f32(const std::filesystem::path& path);
void save_map_f32(const std::filesystem::path& path, const ScoreMap& map);

ScoreMap load_map_png(const std::filesystem::path& path);
void save_map_png(const std::filesystem::path& path, const ScoreMap& map, PngBits bits);

ImageU8 load_image(const std::filesystem::path& path);
void save_image(const std::filesystem::path& path, const ImageU8& image);

}  // namespace mview
