#include "chromasent/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include "chromasent/error.hpp"
#include "chromasent/text.hpp"

namespace chromasent {

namespace sc = sentiment_constants;

namespace {

constexpr std::string_view kNegations[] = {
    "aint",     "arent",    "cannot",   "cant",     "couldnt",  "darent",   "didnt",
    "doesnt",   "ain't",    "aren't",   "can't",    "couldn't", "daren't",  "didn't",
    "doesn't",  "dont",     "hadnt",    "hasnt",    "havent",   "isnt",     "mightnt",
    "mustnt",   "neither",  "don't",    "hadn't",   "hasn't",   "haven't",  "isn't",
    "mightn't", "mustn't",  "neednt",   "needn't",  "never",    "none",     "nope",
    "nor",      "not",      "nothing",  "nowhere",  "oughtnt",  "shant",    "shouldnt",
    "uhuh",     "wasnt",    "werent",   "oughtn't", "shan't",   "shouldn't", "uh-uh",
    "wasn't",   "weren't",  "without",  "wont",     "wouldnt",  "won't",    "wouldn't",
    "rarely",   "seldom",   "despite"};

constexpr std::string_view kBoostersUp[] = {
    "absolutely", "amazingly",  "awfully",      "completely",  "considerable", "considerably",
    "decidedly",  "deeply",     "effing",       "enormous",    "enormously",   "entirely",
    "especially", "exceptional", "exceptionally", "extreme",   "extremely",    "fabulously",
    "flipping",   "flippin",    "frackin",      "fracking",    "fricking",     "frickin",
    "frigging",   "friggin",    "fully",        "fuckin",      "fucking",      "fuggin",
    "fugging",    "greatly",    "hella",        "highly",      "hugely",       "incredible",
    "incredibly", "intensely",  "major",        "majorly",     "more",         "most",
    "particularly", "purely",   "quite",        "really",      "remarkably",   "so",
    "substantially", "thoroughly", "total",     "totally",     "tremendous",   "tremendously",
    "uber",       "unbelievably", "unusually",  "utter",       "utterly",      "very"};

constexpr std::string_view kBoostersDown[] = {
    "almost", "barely",  "hardly",   "kinda",    "kindof",     "kind-of", "less",
    "little", "marginal", "marginally", "occasional", "occasionally", "partly", "scarce",
    "scarcely", "slight", "slightly", "somewhat", "sorta",     "sortof",  "sort-of"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

SentimentLexicon::SentimentLexicon() {
  for (auto w : kNegations) negations_.emplace(w);
  for (auto w : kBoostersUp) boosters_.emplace(std::string(w), sc::kBoosterIncrement);
  for (auto w : kBoostersDown) boosters_.emplace(std::string(w), -sc::kBoosterIncrement);
}

void SentimentLexicon::set_valence(std::string_view token, double valence) {
  if (!std::isfinite(valence)) throw InputError("non-finite valence for '" + std::string(token) + "'");
  auto [it, inserted] = valences_.insert_or_assign(to_lower(token), valence);
  if (!inserted) ++duplicates_;
}

void SentimentLexicon::set_booster(std::string_view token, double increment) {
  boosters_.insert_or_assign(to_lower(token), increment);
}

void SentimentLexicon::add_negation(std::string_view token) { negations_.insert(to_lower(token)); }

std::optional<double> SentimentLexicon::valence(std::string_view lower_token) const {
  auto it = valences_.find(std::string(lower_token));
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SentimentLexicon::booster(std::string_view lower_token) const {
  auto it = boosters_.find(std::string(lower_token));
  if (it == boosters_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negation(std::string_view lower_token) const {
  return negations_.count(std::string(lower_token)) > 0 ||
         lower_token.find("n't") != std::string_view::npos;
}

SentimentLexicon SentimentLexicon::parse(std::istream& in, const std::string& source_name) {
  SentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(source_name, line_no, "expected token<TAB>valence");
    }
    const std::string_view token = view.substr(0, tab);
    std::string_view rest = view.substr(tab + 1);
    rest = trim(rest.substr(0, rest.find('\t')));
    double v = 0.0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc{} || p != rest.data() + rest.size() || !std::isfinite(v)) {
      throw ParseError(source_name, line_no, "invalid valence '" + std::string(rest) + "'");
    }
    lex.set_valence(token, v);
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sentiment lexicon " + path.string());
  return parse(in, path.string());
}

std::string_view to_string(SentimentLabel label) noexcept {
  switch (label) {
    case SentimentLabel::Positive: return "Positive";
    case SentimentLabel::Neutral: return "Neutral";
    case SentimentLabel::Negative: return "Negative";
  }
  return "Neutral";
}

std::optional<SentimentLabel> parse_sentiment_label(std::string_view s) noexcept {
  if (s == "Positive") return SentimentLabel::Positive;
  if (s == "Neutral") return SentimentLabel::Neutral;
  if (s == "Negative") return SentimentLabel::Negative;
  return std::nullopt;
}

double normalize_compound(double sum, double alpha) noexcept {
  const double v = sum / std::sqrt(sum * sum + alpha);
  return std::clamp(v, -1.0, 1.0);
}

SentimentScores score_text(std::string_view text, const SentimentLexicon& lex) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) return {};

  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  std::size_t caps = 0;
  for (const auto& t : tokens) {
    lower.push_back(to_lower(t));
    if (is_all_caps(t)) ++caps;
  }
  const bool cap_differential = caps > 0 && caps < tokens.size();

  constexpr double kDistanceScale[] = {1.0, 0.95, 0.9};
  std::vector<double> valences(tokens.size(), 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lex.booster(lower[i])) continue;
    const auto base = lex.valence(lower[i]);
    if (!base) continue;
    double v = *base;
    if (cap_differential && is_all_caps(tokens[i])) v += v > 0 ? sc::kCapsIncrement : -sc::kCapsIncrement;

    for (std::size_t d = 0; d < 3 && d < i; ++d) {
      const std::size_t j = i - d - 1;
      if (lex.valence(lower[j])) continue;
      if (auto inc = lex.booster(lower[j])) {
        double scalar = v < 0 ? -*inc : *inc;
        if (cap_differential && is_all_caps(tokens[j])) {
          scalar += v > 0 ? sc::kCapsIncrement : -sc::kCapsIncrement;
        }
        v += scalar * kDistanceScale[d];
      }
      if (lex.is_negation(lower[j])) v *= sc::kNegationScalar;
    }
    valences[i] = v;
  }

  const auto bangs = std::min<std::ptrdiff_t>(std::count(text.begin(), text.end(), '!'),
                                              sc::kMaxExclamations);
  const double emphasis = double(bangs) * sc::kExclamationIncrement;

  double sum = 0.0;
  double pos_mass = 0.0, neg_mass = 0.0, neu_count = 0.0;
  for (double v : valences) {
    sum += v;
    if (v > 0) {
      pos_mass += v + 1.0;
    } else if (v < 0) {
      neg_mass += 1.0 - v;
    } else {
      neu_count += 1.0;
    }
  }
  if (sum > 0) {
    sum += emphasis;
  } else if (sum < 0) {
    sum -= emphasis;
  }
  if (pos_mass > neg_mass) {
    pos_mass += emphasis;
  } else if (pos_mass < neg_mass) {
    neg_mass += emphasis;
  }

  const double total = pos_mass + neg_mass + neu_count;
  SentimentScores s;
  s.pos = pos_mass / total;
  s.neg = neg_mass / total;
  s.neu = neu_count / total;
  s.compound = normalize_compound(sum);
  return s;
}

SentimentLabel classify(const SentimentScores& s, ClassifyMode mode) noexcept {
  if (mode == ClassifyMode::Compound) {
    if (s.compound >= 0.05) return SentimentLabel::Positive;
    if (s.compound <= -0.05) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
  }
  if (s.pos > s.neu && s.pos > s.neg) return SentimentLabel::Positive;
  if (s.neg > s.neu && s.neg > s.pos) return SentimentLabel::Negative;
  return SentimentLabel::Neutral;
}

}  // namespace chromasent
