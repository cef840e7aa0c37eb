#include "chromasent/associate.hpp"

#include <algorithm>
#include <iterator>

#include "chromasent/error.hpp"

namespace chromasent {

ScoredReview score_review(const Review& r, const SentimentLexicon& slex, const EmotionLexicon& elex,
                          ClassifyMode mode) {
  if (!r.company_id) throw InputError("review " + std::to_string(r.id) + " is not linked to a company");
  ScoredReview s;
  s.review_id = r.id;
  s.company_id = *r.company_id;
  s.score = r.score;
  s.sentiment = score_text(r.text, slex);
  s.label = classify(s.sentiment, mode);
  s.emotions = score_emotions(r.text, elex);
  return s;
}

CompanyProfile build_profile(const Company& c, std::span<const ScoredReview> reviews,
                             const MappedPalette& palette) {
  CompanyProfile p;
  p.company_id = c.id;
  p.name = c.name;
  p.mapped_palette = palette;
  p.review_count = reviews.size();
  if (reviews.empty()) return p;

  std::vector<EmotionScores> scores;
  scores.reserve(reviews.size());
  for (const auto& r : reviews) {
    scores.push_back(r.emotions);
    ++p.sentiment_tally[r.label];
  }
  p.mean_emotions = mean_emotions(scores);
  p.leading = leading_emotion(p.mean_emotions);
  if (p.leading) p.power_label = linguistic_label(fuzzify_power(p.mean_emotions[*p.leading]));
  return p;
}

std::map<Emotion, std::vector<CompanyProfile>> group_by_emotion(std::span<const CompanyProfile> profiles) {
  std::map<Emotion, std::vector<CompanyProfile>> groups;
  for (const auto& p : profiles) {
    if (p.leading) groups[*p.leading].push_back(p);
  }
  for (auto& [e, g] : groups) {
    std::sort(g.begin(), g.end(),
              [](const CompanyProfile& a, const CompanyProfile& b) { return a.company_id < b.company_id; });
  }
  return groups;
}

std::string_view to_string(Weighting w) noexcept { return w == Weighting::Equal ? "equal" : "power"; }

std::optional<Weighting> parse_weighting(std::string_view s) noexcept {
  if (s == "equal") return Weighting::Equal;
  if (s == "power") return Weighting::Power;
  return std::nullopt;
}

double EmotionPalette::total_weight() const noexcept {
  double t = other_weight;
  for (const auto& e : entries) t += e.weight;
  return t;
}

std::optional<EmotionPalette> aggregate_palette(Emotion emotion, std::span<const CompanyProfile> group,
                                                const AggregateOptions& opts) {
  if (group.empty()) return std::nullopt;
  if (opts.top_n == 0) throw ConfigError("top-N must be at least 1");

  std::vector<const CompanyProfile*> ordered;
  for (const auto& p : group) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const CompanyProfile* a, const CompanyProfile* b) { return a->company_id < b->company_id; });

  std::map<int, double> sums;
  for (const auto* p : ordered) {
    double w = 1.0;
    if (opts.weighting == Weighting::Power) w = p->leading ? p->mean_emotions[*p->leading] : 0.0;
    for (const auto& e : p->mapped_palette.entries) sums[e.color_id] += w * e.weight;
  }
  double total = 0.0;
  for (const auto& [id, w] : sums) total += w;
  if (!(total > 0.0)) throw InputError("group for " + std::string(to_string(emotion)) + " carries no weight");

  std::vector<MappedEntry> ranked;
  ranked.reserve(sums.size());
  for (const auto& [id, w] : sums) ranked.push_back({id, w / total});
  std::sort(ranked.begin(), ranked.end(), [](const MappedEntry& a, const MappedEntry& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.color_id < b.color_id;
  });

  EmotionPalette out;
  out.emotion = emotion;
  out.company_count = group.size();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i < opts.top_n) {
      out.entries.push_back(ranked[i]);
    } else {
      out.other_weight += ranked[i].weight;
    }
  }
  return out;
}

std::set<int> common_colors(std::span<const EmotionPalette> palettes) {
  if (palettes.size() < 2) throw InputError("common colors need at least two palettes");
  std::set<int> common;
  for (const auto& e : palettes.front().entries) common.insert(e.color_id);
  for (std::size_t i = 1; i < palettes.size(); ++i) {
    std::set<int> ids;
    for (const auto& e : palettes[i].entries) ids.insert(e.color_id);
    std::set<int> next;
    std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(),
                          std::inserter(next, next.begin()));
    common = std::move(next);
  }
  return common;
}

namespace {

double sorted_mean(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

}  // namespace

std::vector<RatingSummary> sentiment_by_rating(std::span<const ScoredReview> reviews) {
  struct Columns {
    std::vector<double> pos, neu, neg, compound;
  };
  std::map<int, Columns> by_score;
  for (const auto& r : reviews) {
    auto& c = by_score[r.score];
    c.pos.push_back(r.sentiment.pos);
    c.neu.push_back(r.sentiment.neu);
    c.neg.push_back(r.sentiment.neg);
    c.compound.push_back(r.sentiment.compound);
  }
  std::vector<RatingSummary> out;
  for (auto& [score, c] : by_score) {
    RatingSummary s;
    s.score = score;
    s.count = c.pos.size();
    s.mean_pos = sorted_mean(c.pos);
    s.mean_neu = sorted_mean(c.neu);
    s.mean_neg = sorted_mean(c.neg);
    s.mean_compound = sorted_mean(c.compound);
    out.push_back(s);
  }
  return out;
}

}  // namespace chromasent
