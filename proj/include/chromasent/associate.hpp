#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "chromasent/emotion.hpp"
#include "chromasent/ingest.hpp"
#include "chromasent/palette.hpp"
#include "chromasent/sentiment.hpp"

namespace chromasent {

/// Per-review analysis result. Holds no review text.
struct ScoredReview {
  std::int64_t review_id = 0;
  std::int64_t company_id = 0;
  int score = 0;
  SentimentScores sentiment;
  SentimentLabel label = SentimentLabel::Neutral;
  EmotionScores emotions;
  friend bool operator==(const ScoredReview&, const ScoredReview&) = default;
};

/// Scores one linked review. Throws InputError when the review has no company id.
ScoredReview score_review(const Review& r, const SentimentLexicon& slex, const EmotionLexicon& elex,
                          ClassifyMode mode = ClassifyMode::Argmax);

struct SentimentTally {
  std::array<std::size_t, 3> counts{};  // indexed by SentimentLabel
  std::size_t& operator[](SentimentLabel l) noexcept { return counts[static_cast<std::size_t>(l)]; }
  std::size_t operator[](SentimentLabel l) const noexcept { return counts[static_cast<std::size_t>(l)]; }
  std::size_t total() const noexcept { return counts[0] + counts[1] + counts[2]; }
  friend bool operator==(const SentimentTally&, const SentimentTally&) = default;
};

struct CompanyProfile {
  std::int64_t company_id = 0;
  std::string name;
  MappedPalette mapped_palette;
  EmotionScores mean_emotions;
  std::optional<Emotion> leading;
  std::optional<PowerTerm> power_label;
  SentimentTally sentiment_tally;
  std::size_t review_count = 0;

  /// Companies without a leading emotion take no part in grouping.
  bool excluded() const noexcept { return !leading.has_value(); }
  friend bool operator==(const CompanyProfile&, const CompanyProfile&) = default;
};

/// `reviews` must belong to `c`; their order does not matter.
CompanyProfile build_profile(const Company& c, std::span<const ScoredReview> reviews,
                             const MappedPalette& palette);

/// Partition by leading emotion; each group is sorted by company id. Excluded profiles are dropped.
std::map<Emotion, std::vector<CompanyProfile>> group_by_emotion(std::span<const CompanyProfile> profiles);

enum class Weighting {
  Equal,
  /// Each company contributes in proportion to the mean score of its leading emotion.
  Power,
};

std::string_view to_string(Weighting w) noexcept;
std::optional<Weighting> parse_weighting(std::string_view s) noexcept;

struct AggregateOptions {
  std::size_t top_n = 10;
  Weighting weighting = Weighting::Equal;
};

/// Ranked colors for one emotion. `entries` holds the top-N ids by weight (ties to the lowest id);
/// `other_weight` is the mass of every id past the cut, so entries plus other sum to 1.
struct EmotionPalette {
  Emotion emotion = Emotion::Happy;
  std::vector<MappedEntry> entries;
  double other_weight = 0.0;
  std::size_t company_count = 0;

  double total_weight() const noexcept;
  friend bool operator==(const EmotionPalette&, const EmotionPalette&) = default;
};

/// Merges the mapped palettes of `group`. Returns nullopt for an empty group.
std::optional<EmotionPalette> aggregate_palette(Emotion emotion, std::span<const CompanyProfile> group,
                                                const AggregateOptions& opts = {});

/// Ids present in the top-N of every palette. Throws InputError for fewer than two palettes.
std::set<int> common_colors(std::span<const EmotionPalette> palettes);

struct RatingSummary {
  int score = 0;
  std::size_t count = 0;
  double mean_pos = 0.0;
  double mean_neu = 0.0;
  double mean_neg = 0.0;
  double mean_compound = 0.0;
  friend bool operator==(const RatingSummary&, const RatingSummary&) = default;
};

/// One row per star score that has reviews, ascending by score.
std::vector<RatingSummary> sentiment_by_rating(std::span<const ScoredReview> reviews);

}  // namespace chromasent
