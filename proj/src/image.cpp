#include "chromasent/image.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <unordered_map>

// jpeglib.h expects FILE and size_t to be declared first.
#include <jpeglib.h>

#include "chromasent/error.hpp"

namespace chromasent {

namespace {

bool is_png(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

bool is_jpeg(std::span<const std::uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

RgbaImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw InputError(std::string("PNG decode failed: ") + img.message);
  }
  img.format = PNG_FORMAT_RGBA;
  RgbaImage out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.rgba.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.rgba.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw InputError("PNG decode failed: " + msg);
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

extern "C" void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

struct JpegState {
  RgbaImage image;
  std::vector<std::uint8_t> row;
};

RgbaImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;

  // longjmp must not skip destructors, so all owned state lives behind one raw pointer.
  auto* state = new JpegState;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    delete state;
    throw InputError(std::string("JPEG decode failed: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  RgbaImage& out = state->image;
  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.rgba.resize(static_cast<std::size_t>(out.width) * out.height * 4);
  state->row.resize(static_cast<std::size_t>(out.width) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW rp = state->row.data();
    const int y = static_cast<int>(cinfo.output_scanline);
    jpeg_read_scanlines(&cinfo, &rp, 1);
    for (int x = 0; x < out.width; ++x) {
      const std::size_t o = out.index(x, y);
      out.rgba[o] = state->row[3 * x];
      out.rgba[o + 1] = state->row[3 * x + 1];
      out.rgba[o + 2] = state->row[3 * x + 2];
      out.rgba[o + 3] = 255;
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  RgbaImage result = std::move(out);
  delete state;
  return result;
}

RgbColor pixel_at(const RgbaImage& img, int x, int y) {
  const std::size_t o = img.index(x, y);
  return {img.rgba[o], img.rgba[o + 1], img.rgba[o + 2]};
}

}  // namespace

RgbaImage decode_image(std::span<const std::uint8_t> bytes) {
  RgbaImage img;
  if (is_png(bytes)) {
    img = decode_png(bytes);
  } else if (is_jpeg(bytes)) {
    img = decode_jpeg(bytes);
  } else {
    throw InputError("unrecognized image format (expected PNG or JPEG)");
  }
  if (img.width <= 0 || img.height <= 0) throw InputError("image has zero size");
  return img;
}

std::vector<std::uint8_t> encode_png(const RgbaImage& image) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGBA;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.rgba.data(), 0, nullptr)) {
    throw InputError(std::string("PNG encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.rgba.data(), 0, nullptr)) {
    throw InputError(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RgbaImage downscale_nearest(const RgbaImage& image, int max_dimension) {
  if (max_dimension <= 0) throw ConfigError("max_dimension must be positive");
  const int longest = std::max(image.width, image.height);
  if (longest <= max_dimension) return image;

  RgbaImage out;
  const auto scaled = [&](int side) {
    const long long v = (2LL * side * max_dimension + longest) / (2LL * longest);
    return static_cast<int>(std::max(1LL, v));
  };
  out.width = scaled(image.width);
  out.height = scaled(image.height);
  out.rgba.resize(static_cast<std::size_t>(out.width) * out.height * 4);
  for (int y = 0; y < out.height; ++y) {
    const int sy = static_cast<int>(((2LL * y + 1) * image.height) / (2LL * out.height));
    for (int x = 0; x < out.width; ++x) {
      const int sx = static_cast<int>(((2LL * x + 1) * image.width) / (2LL * out.width));
      std::copy_n(image.rgba.begin() + static_cast<std::ptrdiff_t>(image.index(sx, sy)), 4,
                  out.rgba.begin() + static_cast<std::ptrdiff_t>(out.index(x, y)));
    }
  }
  return out;
}

PixelSet extract_pixels(const RgbaImage& image, const LoadOptions& opts) {
  const RgbaImage img = downscale_nearest(image, opts.max_dimension);
  PixelSet set;
  set.source_width = image.width;
  set.source_height = image.height;
  set.width = img.width;
  set.height = img.height;

  auto opaque = [&](int x, int y) { return img.rgba[img.index(x, y) + 3] >= opts.alpha_threshold; };

  std::optional<RgbColor> background;
  if (opts.drop_background) {
    std::map<std::uint32_t, std::size_t> border_counts;
    auto visit = [&](int x, int y) {
      if (opaque(x, y)) ++border_counts[pixel_at(img, x, y).packed()];
    };
    for (int x = 0; x < img.width; ++x) {
      visit(x, 0);
      if (img.height > 1) visit(x, img.height - 1);
    }
    for (int y = 1; y + 1 < img.height; ++y) {
      visit(0, y);
      if (img.width > 1) visit(img.width - 1, y);
    }
    std::size_t best = 0;
    for (const auto& [packed, count] : border_counts) {
      if (count > best) {  // ascending key order: ties keep the lowest packed value
        best = count;
        background = RgbColor::unpack(packed);
      }
    }
  }

  std::optional<LabColor> bg_lab;
  if (background) bg_lab = srgb_to_lab(*background);
  std::unordered_map<std::uint32_t, bool> is_background;

  set.pixels.reserve(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (!opaque(x, y)) continue;
      const RgbColor c = pixel_at(img, x, y);
      if (bg_lab) {
        auto [it, inserted] = is_background.try_emplace(c.packed(), false);
        if (inserted) it->second = ciede2000(srgb_to_lab(c), *bg_lab) < 2.0;
        if (it->second) continue;
      }
      set.pixels.push_back(c);
    }
  }
  if (set.pixels.empty()) throw EmptyImageError("no pixels left after preprocessing");
  return set;
}

PixelSet load_pixels(std::span<const std::uint8_t> bytes, const LoadOptions& opts) {
  return extract_pixels(decode_image(bytes), opts);
}

}  // namespace chromasent
