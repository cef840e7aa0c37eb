#include "chromasent/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "chromasent/csv.hpp"
#include "chromasent/error.hpp"

namespace chromasent {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string share(std::size_t part, std::size_t whole) {
  return whole == 0 ? format_weight(0.0) : format_weight(double(part) / double(whole));
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const NamedColor& lookup(const ColorModel& model, int id) {
  const NamedColor* c = model.find(id);
  if (!c) throw ConfigError("color id " + std::to_string(id) + " is not in the color model");
  return *c;
}

struct Slice {
  std::string id;  // color id or "other"
  std::string label;
  std::string fill;
  double weight;
};

std::vector<Slice> slices_of(const EmotionPalette& p, const ColorModel& model) {
  std::vector<Slice> out;
  for (const auto& e : p.entries) {
    const auto& c = lookup(model, e.color_id);
    out.push_back({std::to_string(e.color_id), c.name + " " + c.rgb.hex(), c.rgb.hex(), e.weight});
  }
  if (p.other_weight > 1e-12) out.push_back({"other", "other", "#ffffff", p.other_weight});
  return out;
}

std::string data_attrs(const Slice& s) {
  return "data-color-id=\"" + s.id + "\" data-weight=\"" + format_weight(s.weight) + "\"";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  if (!f) throw ConfigError("cannot write report file " + path.string());
}

}  // namespace

std::string format_weight(double w) { return fmt("%.10f", w); }

void write_sentiment_distribution(std::ostream& out, const SentimentTally& tally) {
  write_csv_row(out, {"sentiment", "reviews", "share"});
  for (auto l : {SentimentLabel::Positive, SentimentLabel::Neutral, SentimentLabel::Negative}) {
    write_csv_row(out, {to_string(l), std::to_string(tally[l]), share(tally[l], tally.total())});
  }
}

void write_emotion_distribution(std::ostream& out, std::span<const CompanyProfile> profiles) {
  std::array<std::size_t, 5> counts{};
  std::size_t excluded = 0;
  for (const auto& p : profiles) {
    if (p.leading) {
      ++counts[static_cast<std::size_t>(*p.leading)];
    } else {
      ++excluded;
    }
  }
  write_csv_row(out, {"emotion", "companies", "share"});
  for (auto e : kAllEmotions) {
    const auto n = counts[static_cast<std::size_t>(e)];
    write_csv_row(out, {to_string(e), std::to_string(n), share(n, profiles.size())});
  }
  write_csv_row(out, {"None", std::to_string(excluded), share(excluded, profiles.size())});
}

void write_emotion_colors(std::ostream& out, std::span<const EmotionPalette> palettes,
                          const ColorModel& model, const std::set<int>& common) {
  write_csv_row(out, {"emotion", "rank", "color_id", "name", "hex", "r", "g", "b", "weight", "common"});
  for (const auto& p : palettes) {
    for (std::size_t i = 0; i < p.entries.size(); ++i) {
      const auto& e = p.entries[i];
      const auto& c = lookup(model, e.color_id);
      write_csv_row(out, {to_string(p.emotion), std::to_string(i + 1), std::to_string(e.color_id), c.name,
                          c.rgb.hex(), std::to_string(c.rgb.r), std::to_string(c.rgb.g),
                          std::to_string(c.rgb.b), format_weight(e.weight),
                          common.count(e.color_id) ? "1" : "0"});
    }
  }
}

void write_common_colors(std::ostream& out, const std::set<int>& common, const ColorModel& model) {
  write_csv_row(out, {"color_id", "name", "hex"});
  for (int id : common) {
    const auto& c = lookup(model, id);
    write_csv_row(out, {std::to_string(id), c.name, c.rgb.hex()});
  }
}

void write_sentiment_by_rating(std::ostream& out, std::span<const RatingSummary> rows) {
  write_csv_row(out, {"score", "reviews", "mean_pos", "mean_neu", "mean_neg", "mean_compound"});
  for (const auto& r : rows) {
    write_csv_row(out, {std::to_string(r.score), std::to_string(r.count), fmt("%.6f", r.mean_pos),
                        fmt("%.6f", r.mean_neu), fmt("%.6f", r.mean_neg), fmt("%.6f", r.mean_compound)});
  }
}

std::string render_pie_svg(const EmotionPalette& palette, const ColorModel& model) {
  constexpr double cx = 160.0, cy = 170.0, radius = 140.0;
  const auto slices = slices_of(palette, model);
  const double height = std::max(340.0, 50.0 + 22.0 * double(slices.size()));

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" << fmt("%.0f", height)
    << "\" viewBox=\"0 0 640 " << fmt("%.0f", height) << "\" data-emotion=\"" << to_string(palette.emotion)
    << "\">\n";
  s << "  <title>" << to_string(palette.emotion) << " (" << palette.company_count << " companies)</title>\n";
  s << "  <text x=\"" << cx << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
    << to_string(palette.emotion) << "</text>\n";

  double angle = -std::numbers::pi / 2.0;
  for (const auto& sl : slices) {
    const std::string attrs = data_attrs(sl);
    if (slices.size() == 1) {
      s << "  <circle cx=\"" << fmt("%.3f", cx) << "\" cy=\"" << fmt("%.3f", cy) << "\" r=\""
        << fmt("%.3f", radius) << "\" fill=\"" << sl.fill << "\" stroke=\"#333333\" " << attrs << "/>\n";
      break;
    }
    const double sweep = 2.0 * std::numbers::pi * sl.weight;
    const double x0 = cx + radius * std::cos(angle), y0 = cy + radius * std::sin(angle);
    angle += sweep;
    const double x1 = cx + radius * std::cos(angle), y1 = cy + radius * std::sin(angle);
    s << "  <path d=\"M " << fmt("%.3f", cx) << ' ' << fmt("%.3f", cy) << " L " << fmt("%.3f", x0) << ' '
      << fmt("%.3f", y0) << " A " << fmt("%.3f", radius) << ' ' << fmt("%.3f", radius) << " 0 "
      << (sl.weight > 0.5 ? 1 : 0) << " 1 " << fmt("%.3f", x1) << ' ' << fmt("%.3f", y1)
      << " Z\" fill=\"" << sl.fill << "\" stroke=\"#333333\" stroke-width=\"0.5\" " << attrs << "/>\n";
  }

  for (std::size_t i = 0; i < slices.size(); ++i) {
    const auto& sl = slices[i];
    const double y = 50.0 + 22.0 * double(i);
    s << "  <rect x=\"330\" y=\"" << fmt("%.0f", y - 12.0) << "\" width=\"14\" height=\"14\" fill=\"" << sl.fill
      << "\" stroke=\"#333333\"/>\n";
    s << "  <text x=\"352\" y=\"" << fmt("%.0f", y) << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(sl.label) << ' ' << fmt("%.1f", 100.0 * sl.weight) << "%</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string render_strip_svg(const EmotionPalette& palette, const ColorModel& model) {
  constexpr double width = 600.0, bar = 60.0;
  const auto slices = slices_of(palette, model);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"100\" viewBox=\"0 0 620 100\""
    << " data-emotion=\"" << to_string(palette.emotion) << "\">\n";
  s << "  <title>" << to_string(palette.emotion) << " palette</title>\n";
  s << "  <text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << to_string(palette.emotion)
    << "</text>\n";
  double x = 10.0;
  for (const auto& sl : slices) {
    const double w = width * sl.weight;
    s << "  <rect x=\"" << fmt("%.3f", x) << "\" y=\"30\" width=\"" << fmt("%.3f", w) << "\" height=\""
      << fmt("%.0f", bar) << "\" fill=\"" << sl.fill << "\" stroke=\"#333333\" stroke-width=\"0.5\" "
      << data_attrs(sl) << "><title>" << xml_escape(sl.label) << "</title></rect>\n";
    x += w;
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<fs::path> write_reports(const fs::path& dir, const ReportInputs& in, const ColorModel& model) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create report directory " + dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  auto table = [&](const char* name, auto&& body) {
    std::ostringstream s;
    body(s);
    written.push_back(dir / name);
    write_file(written.back(), s.str());
  };
  table("sentiment_distribution.csv", [&](std::ostream& s) { write_sentiment_distribution(s, in.sentiment); });
  table("emotion_distribution.csv", [&](std::ostream& s) { write_emotion_distribution(s, in.profiles); });
  table("emotion_colors.csv",
        [&](std::ostream& s) { write_emotion_colors(s, in.palettes, model, in.common); });
  table("common_colors.csv", [&](std::ostream& s) { write_common_colors(s, in.common, model); });
  table("sentiment_by_rating.csv", [&](std::ostream& s) { write_sentiment_by_rating(s, in.by_rating); });

  for (const auto& p : in.palettes) {
    const std::string name(to_string(p.emotion));
    written.push_back(dir / ("pie_" + name + ".svg"));
    write_file(written.back(), render_pie_svg(p, model));
    written.push_back(dir / ("palette_" + name + ".svg"));
    write_file(written.back(), render_strip_svg(p, model));
  }
  return written;
}

}  // namespace chromasent
