#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "chromasent/color.hpp"

namespace chromasent {

/// Decoded raster, 8-bit RGBA, row-major.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;  // width * height * 4

  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) * 4;
  }
};

/// Decodes PNG or JPEG bytes (sniffed from the signature). Throws InputError.
RgbaImage decode_image(std::span<const std::uint8_t> bytes);

/// Encodes an RGBA image as PNG.
std::vector<std::uint8_t> encode_png(const RgbaImage& image);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

struct LoadOptions {
  /// Pixels with alpha strictly below this are dropped.
  std::uint8_t alpha_threshold = 8;
  /// Drop pixels within CIEDE2000 < 2 of the most frequent border color.
  bool drop_background = false;
  /// Longest side after nearest-neighbor downscaling.
  int max_dimension = 256;
};

/// Pixels of one logo after preprocessing.
struct PixelSet {
  std::vector<RgbColor> pixels;
  int source_width = 0;
  int source_height = 0;
  /// Dimensions of the sampled raster the pixels were taken from.
  int width = 0;
  int height = 0;
};

/// Nearest-neighbor downscale so that max(width, height) <= max_dimension.
RgbaImage downscale_nearest(const RgbaImage& image, int max_dimension);

/// Preprocesses a decoded image. Throws EmptyImageError when no pixels remain.
PixelSet extract_pixels(const RgbaImage& image, const LoadOptions& opts = {});

/// decode_image followed by extract_pixels.
PixelSet load_pixels(std::span<const std::uint8_t> bytes, const LoadOptions& opts = {});

}  // namespace chromasent
