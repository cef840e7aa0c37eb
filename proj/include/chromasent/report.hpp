#pragma once

#include <filesystem>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chromasent/associate.hpp"
#include "chromasent/color.hpp"

namespace chromasent {

/// Everything the report writer needs, already loaded from the store.
struct ReportInputs {
  SentimentTally sentiment;  // over all scored reviews
  std::vector<CompanyProfile> profiles;
  std::vector<EmotionPalette> palettes;  // non-empty groups only
  std::set<int> common;
  std::vector<RatingSummary> by_rating;
};

/// Fixed-precision rendering shared by tables and graphics so both show identical weights.
std::string format_weight(double w);

void write_sentiment_distribution(std::ostream& out, const SentimentTally& tally);
/// One row per emotion (absent groups listed with count 0) plus a row for excluded companies.
void write_emotion_distribution(std::ostream& out, std::span<const CompanyProfile> profiles);
void write_emotion_colors(std::ostream& out, std::span<const EmotionPalette> palettes,
                          const ColorModel& model, const std::set<int>& common);
void write_common_colors(std::ostream& out, const std::set<int>& common, const ColorModel& model);
void write_sentiment_by_rating(std::ostream& out, std::span<const RatingSummary> rows);

/// Standalone SVG documents. Each colored shape carries `data-color-id` and `data-weight`;
/// the remainder past the top-N is drawn as a single "other" slice.
std::string render_pie_svg(const EmotionPalette& palette, const ColorModel& model);
std::string render_strip_svg(const EmotionPalette& palette, const ColorModel& model);

/// Writes every table and graphic into `dir` (created if needed) and returns the paths written.
std::vector<std::filesystem::path> write_reports(const std::filesystem::path& dir, const ReportInputs& in,
                                                 const ColorModel& model);

}  // namespace chromasent
