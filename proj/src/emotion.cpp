#include "chromasent/emotion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "chromasent/error.hpp"
#include "chromasent/text.hpp"

namespace chromasent {

std::string_view to_string(Emotion e) noexcept {
  switch (e) {
    case Emotion::Happy: return "Happy";
    case Emotion::Angry: return "Angry";
    case Emotion::Sad: return "Sad";
    case Emotion::Surprise: return "Surprise";
    case Emotion::Fear: return "Fear";
  }
  return "Happy";
}

std::optional<Emotion> parse_emotion(std::string_view s) noexcept {
  const std::string l = to_lower(s);
  if (l == "happy" || l == "happiness" || l == "joy") return Emotion::Happy;
  if (l == "angry" || l == "anger") return Emotion::Angry;
  if (l == "sad" || l == "sadness") return Emotion::Sad;
  if (l == "surprise" || l == "surprised") return Emotion::Surprise;
  if (l == "fear" || l == "afraid") return Emotion::Fear;
  return std::nullopt;
}

void EmotionLexicon::add(std::string_view token, Emotion e) { entries_.insert_or_assign(to_lower(token), e); }

std::optional<Emotion> EmotionLexicon::lookup(std::string_view lower_token) const {
  auto it = entries_.find(std::string(lower_token));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

EmotionLexicon EmotionLexicon::parse(std::istream& in, const std::string& source_name) {
  EmotionLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(source_name, line_no, "expected token<TAB>emotion");
    }
    const std::string_view rest = std::string_view(line).substr(tab + 1);
    auto e = parse_emotion(rest.substr(0, rest.find('\t')));
    if (!e) throw ParseError(source_name, line_no, "unknown emotion '" + std::string(rest) + "'");
    lex.add(std::string_view(line).substr(0, tab), *e);
  }
  return lex;
}

EmotionLexicon EmotionLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open emotion lexicon " + path.string());
  return parse(in, path.string());
}

bool EmotionScores::all_zero() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

EmotionScores score_emotions(std::string_view text, const EmotionLexicon& lex) {
  std::array<int, 5> counts{};
  int total = 0;
  for (const auto& tok : tokenize(text)) {
    if (auto e = lex.lookup(to_lower(tok))) {
      ++counts[static_cast<std::size_t>(*e)];
      ++total;
    }
  }
  EmotionScores s;
  if (total == 0) return s;
  for (std::size_t i = 0; i < 5; ++i) s.values[i] = double(counts[i]) / double(total);
  return s;
}

std::string_view to_string(PowerTerm t) noexcept {
  switch (t) {
    case PowerTerm::Weak: return "Weak";
    case PowerTerm::Medium: return "Medium";
    case PowerTerm::Strong: return "Strong";
    case PowerTerm::VeryStrong: return "Very Strong";
  }
  return "Weak";
}

std::optional<PowerTerm> parse_power_term(std::string_view s) noexcept {
  if (s == "Weak" || s == "Low") return PowerTerm::Weak;
  if (s == "Medium") return PowerTerm::Medium;
  if (s == "Strong") return PowerTerm::Strong;
  if (s == "Very Strong") return PowerTerm::VeryStrong;
  return std::nullopt;
}

EmotionPowerMembership fuzzify_power(double x) {
  if (!std::isfinite(x)) throw InputError("emotion power must be finite");
  EmotionPowerMembership m;
  if (x < 0.0 || x > 1.0) {
    m.clamped = true;
    x = std::clamp(x, 0.0, 1.0);
  }
  // Knot spacing 1/3: u falls in segment i of [0, 3]; the two adjacent terms share it.
  const double u = 3.0 * x;
  const int seg = std::min(2, static_cast<int>(std::floor(u)));
  const double t = u - seg;
  m.degrees[static_cast<std::size_t>(seg)] = 1.0 - t;
  m.degrees[static_cast<std::size_t>(seg) + 1] = t;
  return m;
}

PowerTerm linguistic_label(const EmotionPowerMembership& m) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.degrees.size(); ++i) {
    if (m.degrees[i] >= m.degrees[best]) best = i;
  }
  return static_cast<PowerTerm>(best);
}

EmotionScores mean_emotions(std::span<const EmotionScores> scores) {
  if (scores.empty()) throw InputError("mean_emotions needs at least one score vector");
  std::array<std::vector<double>, 5> columns;
  for (const auto& s : scores) {
    if (s.all_zero()) continue;
    for (std::size_t i = 0; i < 5; ++i) columns[i].push_back(s.values[i]);
  }
  EmotionScores out;
  if (columns[0].empty()) return out;
  const double n = double(columns[0].size());
  for (std::size_t i = 0; i < 5; ++i) {
    // Summing in sorted order makes the result independent of input order.
    std::sort(columns[i].begin(), columns[i].end());
    double sum = 0.0;
    for (double v : columns[i]) sum += v;
    out.values[i] = sum / n;
  }
  return out;
}

std::optional<Emotion> leading_emotion(const EmotionScores& m) noexcept {
  static constexpr Emotion priority[] = {Emotion::Happy, Emotion::Fear, Emotion::Sad,
                                         Emotion::Surprise, Emotion::Angry};
  std::optional<Emotion> best;
  for (auto e : priority) {
    if (m[e] > 0.0 && (!best || m[e] > m[*best])) best = e;
  }
  return best;
}

}  // namespace chromasent
