#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace chromasent {

/// Valence lexicon plus the modifier word lists used by the scoring rules.
class SentimentLexicon {
 public:
  /// Empty valence map with the default booster and negation lists.
  SentimentLexicon();

  /// Adds or replaces a valence entry. The token is lowercased; the value must be finite.
  void set_valence(std::string_view token, double valence);
  void set_booster(std::string_view token, double increment);
  void add_negation(std::string_view token);

  std::optional<double> valence(std::string_view lower_token) const;
  std::optional<double> booster(std::string_view lower_token) const;
  bool is_negation(std::string_view lower_token) const;

  std::size_t size() const noexcept { return valences_.size(); }
  /// Entries that repeated an earlier token while parsing (later entry kept).
  std::size_t duplicates() const noexcept { return duplicates_; }

  /// Reads `token<TAB>valence` lines; extra tab-separated columns and `#` comments are ignored.
  static SentimentLexicon parse(std::istream& in, const std::string& source_name = "<stream>");
  static SentimentLexicon load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, double> valences_;
  std::unordered_map<std::string, double> boosters_;
  std::unordered_set<std::string> negations_;
  std::size_t duplicates_ = 0;
};

/// Proportions of positive/neutral/negative mass and the normalized compound score.
struct SentimentScores {
  double pos = 0.0;
  double neu = 0.0;
  double neg = 0.0;
  double compound = 0.0;

  friend bool operator==(const SentimentScores&, const SentimentScores&) = default;
};

enum class SentimentLabel { Positive, Neutral, Negative };

std::string_view to_string(SentimentLabel label) noexcept;
std::optional<SentimentLabel> parse_sentiment_label(std::string_view s) noexcept;

enum class ClassifyMode {
  /// Largest of pos/neu/neg; ties resolve to Neutral.
  Argmax,
  /// compound >= 0.05 Positive, <= -0.05 Negative, otherwise Neutral.
  Compound,
};

namespace sentiment_constants {
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kBoosterIncrement = 0.293;
inline constexpr double kCapsIncrement = 0.733;
inline constexpr double kExclamationIncrement = 0.292;
inline constexpr int kMaxExclamations = 3;
inline constexpr double kAlpha = 15.0;
}  // namespace sentiment_constants

/// S / sqrt(S^2 + alpha), clamped to [-1, 1].
double normalize_compound(double sum, double alpha = sentiment_constants::kAlpha) noexcept;

/// Rule-based lexicon scoring of one text.
///
/// Each token's lexicon valence is adjusted by ALL-CAPS emphasis (only when some but not
/// all tokens are capitalized), booster words in the three preceding positions (scaled
/// 1, 0.95, 0.9 by distance) and negations in the same window. Preceding tokens that are
/// themselves lexicon entries do not act as modifiers. Exclamation marks (at most three)
/// push the sum away from zero.
SentimentScores score_text(std::string_view text, const SentimentLexicon& lex);

SentimentLabel classify(const SentimentScores& s, ClassifyMode mode = ClassifyMode::Argmax) noexcept;

}  // namespace chromasent
