#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace chromasent {

/// 8-bit sRGB color. The channel type enforces the [0, 255] range.
struct RgbColor {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  /// Builds a color from wide integers, throwing InputError when a channel is outside [0, 255].
  static RgbColor from_ints(long r, long g, long b);

  /// Packs the channels as 0xRRGGBB.
  constexpr std::uint32_t packed() const noexcept {
    return (std::uint32_t{r} << 16) | (std::uint32_t{g} << 8) | std::uint32_t{b};
  }
  static constexpr RgbColor unpack(std::uint32_t v) noexcept {
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v)};
  }

  /// Lowercase "#rrggbb".
  std::string hex() const;

  friend constexpr bool operator==(const RgbColor&, const RgbColor&) = default;
};

/// CIELAB color. L is kept in [0, 100]; a and b are finite.
struct LabColor {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;

  friend constexpr bool operator==(const LabColor&, const LabColor&) = default;
};

/// sRGB (D65, 2 degree observer) to CIELAB.
LabColor srgb_to_lab(RgbColor c) noexcept;

/// CIEDE2000 parametric weights; all three default to 1 (reference conditions).
struct DeltaEWeights {
  double kL = 1.0;
  double kC = 1.0;
  double kH = 1.0;
};

/// CIEDE2000 color difference. Symmetric and non-negative.
///
/// Achromatic inputs (C' = 0) get hue angle 0 and contribute no hue difference.
double ciede2000(const LabColor& x, const LabColor& y, const DeltaEWeights& w = {}) noexcept;

/// Euclidean distance in 8-bit RGB.
double rgb_distance(RgbColor c1, RgbColor c2) noexcept;

struct NamedColor {
  int id = 0;
  std::string name;
  RgbColor rgb;
};

/// Ordered set of reference colors that extracted centroids are mapped onto.
///
/// Construction validates the set (non-empty, unique non-negative ids) and caches
/// each color's Lab coordinates so nearest-color queries do not recompute them.
class ColorModel {
 public:
  explicit ColorModel(std::vector<NamedColor> colors);

  /// The 43-color model shipped with the library.
  static const ColorModel& default_model();

  std::span<const NamedColor> colors() const noexcept { return colors_; }
  std::size_t size() const noexcept { return colors_.size(); }

  /// Color with the given id, or nullptr.
  const NamedColor* find(int id) const noexcept;

  /// Id of the model color with the smallest CIEDE2000 distance to c; ties go to the lowest id.
  int nearest(RgbColor c) const;

 private:
  std::vector<NamedColor> colors_;
  std::vector<LabColor> labs_;
};

/// Free-function form of ColorModel::nearest.
inline int nearest_model_color(RgbColor c, const ColorModel& model) { return model.nearest(c); }

/// Parses `id,name,r,g,b` rows (header required). Throws ParseError / ConfigError.
ColorModel parse_color_model(std::istream& in, const std::string& source_name = "<stream>");
ColorModel load_color_model(const std::filesystem::path& path);

/// Serializes in the format parse_color_model reads.
void write_color_model(std::ostream& out, const ColorModel& model);

}  // namespace chromasent
