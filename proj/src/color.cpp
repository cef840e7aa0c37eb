#include "chromasent/color.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "chromasent/csv.hpp"
#include "chromasent/error.hpp"

namespace chromasent {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

double srgb_to_linear(std::uint8_t v) {
  const double c = v / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

// Hue angle in degrees, [0, 360). Achromatic points get 0.
double hue_degrees(double b, double a_prime) {
  if (a_prime == 0.0 && b == 0.0) return 0.0;
  double h = rad_to_deg(std::atan2(b, a_prime));
  if (h < 0.0) h += 360.0;
  return h;
}

}  // namespace

RgbColor RgbColor::from_ints(long r, long g, long b) {
  auto ok = [](long v) { return v >= 0 && v <= 255; };
  if (!ok(r) || !ok(g) || !ok(b)) {
    throw InputError("RGB channel out of range [0, 255]: (" + std::to_string(r) + "," +
                     std::to_string(g) + "," + std::to_string(b) + ")");
  }
  return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
          static_cast<std::uint8_t>(b)};
}

std::string RgbColor::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s = "#000000";
  const std::array<std::uint8_t, 3> ch{r, g, b};
  for (std::size_t i = 0; i < 3; ++i) {
    s[1 + 2 * i] = digits[ch[i] >> 4];
    s[2 + 2 * i] = digits[ch[i] & 0xF];
  }
  return s;
}

LabColor srgb_to_lab(RgbColor c) noexcept {
  const double r = srgb_to_linear(c.r);
  const double g = srgb_to_linear(c.g);
  const double b = srgb_to_linear(c.b);

  // sRGB primaries, D65 white.
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

  constexpr double xn = 0.95047, yn = 1.0, zn = 1.08883;
  const double fx = lab_f(x / xn);
  const double fy = lab_f(y / yn);
  const double fz = lab_f(z / zn);

  LabColor lab;
  lab.L = std::clamp(116.0 * fy - 16.0, 0.0, 100.0);
  lab.a = 500.0 * (fx - fy);
  lab.b = 200.0 * (fy - fz);
  return lab;
}

double ciede2000(const LabColor& x, const LabColor& y, const DeltaEWeights& w) noexcept {
  constexpr double pow25_7 = 6103515625.0;  // 25^7

  const double c1 = std::hypot(x.a, x.b);
  const double c2 = std::hypot(y.a, y.b);
  const double c_bar7 = std::pow((c1 + c2) / 2.0, 7.0);
  const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + pow25_7)));

  const double a1p = (1.0 + g) * x.a;
  const double a2p = (1.0 + g) * y.a;
  const double c1p = std::hypot(a1p, x.b);
  const double c2p = std::hypot(a2p, y.b);
  const double h1p = hue_degrees(x.b, a1p);
  const double h2p = hue_degrees(y.b, a2p);
  const double cp_prod = c1p * c2p;

  const double d_lp = y.L - x.L;
  const double d_cp = c2p - c1p;

  double d_hp = 0.0;
  if (cp_prod != 0.0) {
    d_hp = h2p - h1p;
    if (d_hp > 180.0) {
      d_hp -= 360.0;
    } else if (d_hp < -180.0) {
      d_hp += 360.0;
    }
  }
  const double d_Hp = 2.0 * std::sqrt(cp_prod) * std::sin(deg_to_rad(d_hp / 2.0));

  const double l_bar = (x.L + y.L) / 2.0;
  const double c_bar_p = (c1p + c2p) / 2.0;

  double h_bar = h1p + h2p;
  if (cp_prod != 0.0) {
    if (std::abs(h1p - h2p) <= 180.0) {
      h_bar /= 2.0;
    } else if (h_bar < 360.0) {
      h_bar = (h_bar + 360.0) / 2.0;
    } else {
      h_bar = (h_bar - 360.0) / 2.0;
    }
  }

  const double t = 1.0 - 0.17 * std::cos(deg_to_rad(h_bar - 30.0)) +
                   0.24 * std::cos(deg_to_rad(2.0 * h_bar)) +
                   0.32 * std::cos(deg_to_rad(3.0 * h_bar + 6.0)) -
                   0.20 * std::cos(deg_to_rad(4.0 * h_bar - 63.0));

  const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
  const double c_bar_p7 = std::pow(c_bar_p, 7.0);
  const double r_c = 2.0 * std::sqrt(c_bar_p7 / (c_bar_p7 + pow25_7));
  const double lm50 = (l_bar - 50.0) * (l_bar - 50.0);
  const double s_l = 1.0 + 0.015 * lm50 / std::sqrt(20.0 + lm50);
  const double s_c = 1.0 + 0.045 * c_bar_p;
  const double s_h = 1.0 + 0.015 * c_bar_p * t;
  const double r_t = -std::sin(deg_to_rad(2.0 * d_theta)) * r_c;

  const double tl = d_lp / (w.kL * s_l);
  const double tc = d_cp / (w.kC * s_c);
  const double th = d_Hp / (w.kH * s_h);
  return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th));
}

double rgb_distance(RgbColor c1, RgbColor c2) noexcept {
  const double dr = double(c2.r) - c1.r;
  const double dg = double(c2.g) - c1.g;
  const double db = double(c2.b) - c1.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

ColorModel::ColorModel(std::vector<NamedColor> colors) : colors_(std::move(colors)) {
  if (colors_.empty()) throw ConfigError("color model is empty");
  std::set<int> seen;
  labs_.reserve(colors_.size());
  for (const auto& c : colors_) {
    if (c.id < 0) throw ConfigError("color model id must be non-negative: " + std::to_string(c.id));
    if (!seen.insert(c.id).second) {
      throw ConfigError("duplicate color model id " + std::to_string(c.id));
    }
    labs_.push_back(srgb_to_lab(c.rgb));
  }
}

const NamedColor* ColorModel::find(int id) const noexcept {
  auto it = std::find_if(colors_.begin(), colors_.end(), [id](const auto& c) { return c.id == id; });
  return it == colors_.end() ? nullptr : &*it;
}

int ColorModel::nearest(RgbColor c) const {
  if (colors_.empty()) throw ConfigError("color model is empty");
  const LabColor q = srgb_to_lab(c);
  std::size_t best = 0;
  double best_d = ciede2000(q, labs_[0]);
  for (std::size_t i = 1; i < colors_.size(); ++i) {
    const double d = ciede2000(q, labs_[i]);
    if (d < best_d || (d == best_d && colors_[i].id < colors_[best].id)) {
      best = i;
      best_d = d;
    }
  }
  return colors_[best].id;
}

const ColorModel& ColorModel::default_model() {
  // Ids 0, 2, 5, 8, 14, 15, 17, 21, 22, 27, 30, 34, 37, 38, 41, 42 carry the reference RGB
  // values. The remaining entries follow the classic 56-color office palette those values
  // come from (chart duplicates removed) and are not canonical.
  static const ColorModel model(std::vector<NamedColor>{
      {0, "Black", {0, 0, 0}},
      {1, "White", {255, 255, 255}},
      {2, "Red", {255, 0, 0}},
      {3, "Bright Green", {0, 255, 0}},
      {4, "Blue", {0, 0, 255}},
      {5, "Yellow", {255, 255, 0}},
      {6, "Pink", {255, 0, 255}},
      {7, "Turquoise", {0, 255, 255}},
      {8, "Dark Red", {128, 0, 0}},
      {9, "Green", {0, 128, 0}},
      {10, "Dark Blue", {0, 0, 128}},
      {11, "Dark Yellow", {128, 128, 0}},
      {12, "Violet", {128, 0, 128}},
      {13, "Teal", {0, 128, 128}},
      {14, "Silver", {192, 192, 192}},
      {15, "Gray", {128, 128, 128}},
      {16, "Periwinkle", {153, 153, 255}},
      {17, "Plum", {153, 51, 102}},
      {18, "Ivory", {255, 255, 204}},
      {19, "Light Turquoise", {204, 255, 255}},
      {20, "Dark Purple", {102, 0, 102}},
      {21, "Coral", {255, 128, 128}},
      {22, "Ocean Blue", {0, 102, 204}},
      {23, "Ice Blue", {204, 204, 255}},
      {24, "Sky Blue", {0, 204, 255}},
      {25, "Light Green", {204, 255, 204}},
      {26, "Light Yellow", {255, 255, 153}},
      {27, "Pale Blue", {153, 204, 255}},
      {28, "Rose", {255, 153, 204}},
      {29, "Lavender", {204, 153, 255}},
      {30, "Tan", {255, 204, 153}},
      {31, "Light Blue", {51, 102, 255}},
      {32, "Aqua", {51, 204, 204}},
      {33, "Lime", {153, 204, 0}},
      {34, "Gold", {255, 204, 0}},
      {35, "Light Orange", {255, 153, 0}},
      {36, "Orange", {255, 102, 0}},
      {37, "Blue Gray", {102, 102, 153}},
      {38, "Dark Teal", {0, 51, 102}},
      {39, "Sea Green", {51, 153, 102}},
      {40, "Dark Green", {0, 51, 0}},
      {41, "Brown", {153, 51, 0}},
      {42, "Indigo", {51, 51, 153}},
  });
  return model;
}

namespace {

long parse_long(const std::string& s, const std::string& source, std::size_t line,
                const char* what) {
  long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e || b == e) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

ColorModel parse_color_model(std::istream& in, const std::string& source_name) {
  CsvReader reader(in, source_name);
  std::vector<std::string> row;
  if (!reader.next(row)) throw ConfigError(source_name + ": color model file is empty");
  static const std::vector<std::string> kHeader{"id", "name", "r", "g", "b"};
  if (!row.empty() && row[0].rfind("\xEF\xBB\xBF", 0) == 0) row[0].erase(0, 3);
  if (row != kHeader) {
    throw ParseError(source_name, reader.record_line(), "expected header id,name,r,g,b");
  }
  std::vector<NamedColor> colors;
  while (reader.next(row)) {
    const auto line = reader.record_line();
    if (row.size() != 5) {
      throw ParseError(source_name, line,
                       "expected 5 fields, got " + std::to_string(row.size()));
    }
    NamedColor c;
    c.id = static_cast<int>(parse_long(row[0], source_name, line, "id"));
    c.name = row[1];
    try {
      c.rgb = RgbColor::from_ints(parse_long(row[2], source_name, line, "r"),
                                  parse_long(row[3], source_name, line, "g"),
                                  parse_long(row[4], source_name, line, "b"));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(source_name, line, e.what());
    }
    colors.push_back(std::move(c));
  }
  return ColorModel(std::move(colors));
}

ColorModel load_color_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open color model file " + path.string());
  return parse_color_model(in, path.string());
}

void write_color_model(std::ostream& out, const ColorModel& model) {
  write_csv_row(out, {"id", "name", "r", "g", "b"});
  for (const auto& c : model.colors()) {
    write_csv_row(out, {std::to_string(c.id), c.name, std::to_string(c.rgb.r),
                        std::to_string(c.rgb.g), std::to_string(c.rgb.b)});
  }
}

}  // namespace chromasent
