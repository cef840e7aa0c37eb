#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace chromasent {

enum class Emotion { Happy = 0, Angry = 1, Sad = 2, Surprise = 3, Fear = 4 };

inline constexpr std::array<Emotion, 5> kAllEmotions = {Emotion::Happy, Emotion::Angry, Emotion::Sad,
                                                        Emotion::Surprise, Emotion::Fear};

std::string_view to_string(Emotion e) noexcept;
/// Accepts the canonical names case-insensitively, plus common synonyms ("anger", "sadness", ...).
std::optional<Emotion> parse_emotion(std::string_view s) noexcept;

class EmotionLexicon {
 public:
  void add(std::string_view token, Emotion e);
  std::optional<Emotion> lookup(std::string_view lower_token) const;
  std::size_t size() const noexcept { return entries_.size(); }

  /// Reads `token<TAB>emotion` lines; `#` comments ignored. Throws ParseError.
  static EmotionLexicon parse(std::istream& in, const std::string& source_name = "<stream>");
  static EmotionLexicon load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, Emotion> entries_;
};

/// Share of each emotion among a text's emotion tokens. All zero or summing to 1.
struct EmotionScores {
  std::array<double, 5> values{};

  double& operator[](Emotion e) noexcept { return values[static_cast<std::size_t>(e)]; }
  double operator[](Emotion e) const noexcept { return values[static_cast<std::size_t>(e)]; }
  bool all_zero() const noexcept;

  friend bool operator==(const EmotionScores&, const EmotionScores&) = default;
};

EmotionScores score_emotions(std::string_view text, const EmotionLexicon& lex);

/// Linguistic terms of the "emotion power" variable, weakest first.
enum class PowerTerm { Weak = 0, Medium = 1, Strong = 2, VeryStrong = 3 };

std::string_view to_string(PowerTerm t) noexcept;
/// Also accepts "Low" as an alias of Weak.
std::optional<PowerTerm> parse_power_term(std::string_view s) noexcept;

struct EmotionPowerMembership {
  std::array<double, 4> degrees{};
  /// The input was outside [0, 1] and was clamped.
  bool clamped = false;

  double operator[](PowerTerm t) const noexcept { return degrees[static_cast<std::size_t>(t)]; }
};

/// Triangular memberships with knots at 0, 1/3, 2/3 and 1; they sum to 1 everywhere.
/// Non-finite input throws InputError.
EmotionPowerMembership fuzzify_power(double x);

/// Term with the highest membership; ties go to the stronger term.
PowerTerm linguistic_label(const EmotionPowerMembership& m) noexcept;

/// Component-wise mean over the non-zero inputs. Throws InputError on an empty list.
EmotionScores mean_emotions(std::span<const EmotionScores> scores);

/// Argmax emotion, nullopt when all zero. Tie priority: Happy, Fear, Sad, Surprise, Angry.
std::optional<Emotion> leading_emotion(const EmotionScores& m) noexcept;

}  // namespace chromasent
