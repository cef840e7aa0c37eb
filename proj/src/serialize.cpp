#include "chromasent/serialize.hpp"

namespace chromasent {

namespace {

template <typename E, typename Parse>
E enum_from(const Json& j, Parse parse, const char* what) {
  const auto s = j.get<std::string>();
  const auto v = parse(s);
  if (!v) throw InputError(std::string("unknown ") + what + " '" + s + "'");
  return *v;
}

}  // namespace

void to_json(Json& j, const RgbPoint& p) { j = Json::array({p.r, p.g, p.b}); }

void from_json(const Json& j, RgbPoint& p) {
  p.r = j.at(0).get<double>();
  p.g = j.at(1).get<double>();
  p.b = j.at(2).get<double>();
}

void to_json(Json& j, const PaletteEntry& e) { j = Json{{"centroid", e.centroid}, {"weight", e.weight}}; }

void from_json(const Json& j, PaletteEntry& e) {
  j.at("centroid").get_to(e.centroid);
  j.at("weight").get_to(e.weight);
}

void to_json(Json& j, const MappedEntry& e) { j = Json{{"color_id", e.color_id}, {"weight", e.weight}}; }

void from_json(const Json& j, MappedEntry& e) {
  j.at("color_id").get_to(e.color_id);
  j.at("weight").get_to(e.weight);
}

void to_json(Json& j, const MappedPalette& p) { j = p.entries; }
void from_json(const Json& j, MappedPalette& p) { j.get_to(p.entries); }

void to_json(Json& j, const EmotionScores& s) {
  j = Json::object();
  for (auto e : kAllEmotions) j[std::string(to_string(e))] = s[e];
}

void from_json(const Json& j, EmotionScores& s) {
  for (auto e : kAllEmotions) s[e] = j.at(std::string(to_string(e))).get<double>();
}

void to_json(Json& j, const SentimentScores& s) {
  j = Json{{"pos", s.pos}, {"neu", s.neu}, {"neg", s.neg}, {"compound", s.compound}};
}

void from_json(const Json& j, SentimentScores& s) {
  j.at("pos").get_to(s.pos);
  j.at("neu").get_to(s.neu);
  j.at("neg").get_to(s.neg);
  j.at("compound").get_to(s.compound);
}

void to_json(Json& j, const SentimentTally& t) {
  j = Json{{"Positive", t[SentimentLabel::Positive]},
           {"Neutral", t[SentimentLabel::Neutral]},
           {"Negative", t[SentimentLabel::Negative]}};
}

void from_json(const Json& j, SentimentTally& t) {
  t[SentimentLabel::Positive] = j.at("Positive").get<std::size_t>();
  t[SentimentLabel::Neutral] = j.at("Neutral").get<std::size_t>();
  t[SentimentLabel::Negative] = j.at("Negative").get<std::size_t>();
}

void to_json(Json& j, const Company& c) {
  j = Json{{"id", c.id}, {"name", c.name}, {"category", c.category}, {"logo_path", c.logo_path}};
}

void from_json(const Json& j, Company& c) {
  j.at("id").get_to(c.id);
  j.at("name").get_to(c.name);
  j.at("category").get_to(c.category);
  j.at("logo_path").get_to(c.logo_path);
}

void to_json(Json& j, const Review& r) {
  j = Json{{"id", r.id},       {"company_name", r.company_name}, {"category", r.category},
           {"score", r.score}, {"text", r.text},                 {"time", r.time}};
  j["company_id"] = r.company_id ? Json(*r.company_id) : Json();
}

void from_json(const Json& j, Review& r) {
  j.at("id").get_to(r.id);
  j.at("company_name").get_to(r.company_name);
  j.at("category").get_to(r.category);
  j.at("score").get_to(r.score);
  j.at("text").get_to(r.text);
  j.at("time").get_to(r.time);
  const auto& cid = j.at("company_id");
  r.company_id = cid.is_null() ? std::nullopt : std::optional<std::int64_t>(cid.get<std::int64_t>());
}

void to_json(Json& j, const ScoredReview& r) {
  j = Json{{"review_id", r.review_id},
           {"company_id", r.company_id},
           {"score", r.score},
           {"sentiment", r.sentiment},
           {"label", std::string(to_string(r.label))},
           {"emotions", r.emotions}};
}

void from_json(const Json& j, ScoredReview& r) {
  j.at("review_id").get_to(r.review_id);
  j.at("company_id").get_to(r.company_id);
  j.at("score").get_to(r.score);
  j.at("sentiment").get_to(r.sentiment);
  r.label = enum_from<SentimentLabel>(j.at("label"), parse_sentiment_label, "sentiment label");
  j.at("emotions").get_to(r.emotions);
}

void to_json(Json& j, const CompanyProfile& p) {
  j = Json{{"company_id", p.company_id},
           {"name", p.name},
           {"mapped_palette", p.mapped_palette},
           {"mean_emotions", p.mean_emotions},
           {"sentiment_tally", p.sentiment_tally},
           {"review_count", p.review_count}};
  j["leading"] = p.leading ? Json(std::string(to_string(*p.leading))) : Json();
  j["power_label"] = p.power_label ? Json(std::string(to_string(*p.power_label))) : Json();
}

void from_json(const Json& j, CompanyProfile& p) {
  j.at("company_id").get_to(p.company_id);
  j.at("name").get_to(p.name);
  j.at("mapped_palette").get_to(p.mapped_palette);
  j.at("mean_emotions").get_to(p.mean_emotions);
  j.at("sentiment_tally").get_to(p.sentiment_tally);
  j.at("review_count").get_to(p.review_count);
  const auto& lead = j.at("leading");
  p.leading = lead.is_null() ? std::nullopt
                             : std::optional<Emotion>(enum_from<Emotion>(lead, parse_emotion, "emotion"));
  const auto& power = j.at("power_label");
  p.power_label = power.is_null() ? std::nullopt
                                  : std::optional<PowerTerm>(
                                        enum_from<PowerTerm>(power, parse_power_term, "power term"));
}

void to_json(Json& j, const EmotionPalette& p) {
  j = Json{{"emotion", std::string(to_string(p.emotion))},
           {"entries", p.entries},
           {"other_weight", p.other_weight},
           {"company_count", p.company_count}};
}

void from_json(const Json& j, EmotionPalette& p) {
  p.emotion = enum_from<Emotion>(j.at("emotion"), parse_emotion, "emotion");
  j.at("entries").get_to(p.entries);
  j.at("other_weight").get_to(p.other_weight);
  j.at("company_count").get_to(p.company_count);
}

void to_json(Json& j, const RatingSummary& s) {
  j = Json{{"score", s.score},       {"count", s.count},       {"mean_pos", s.mean_pos},
           {"mean_neu", s.mean_neu}, {"mean_neg", s.mean_neg}, {"mean_compound", s.mean_compound}};
}

void from_json(const Json& j, RatingSummary& s) {
  j.at("score").get_to(s.score);
  j.at("count").get_to(s.count);
  j.at("mean_pos").get_to(s.mean_pos);
  j.at("mean_neu").get_to(s.mean_neu);
  j.at("mean_neg").get_to(s.mean_neg);
  j.at("mean_compound").get_to(s.mean_compound);
}

}  // namespace chromasent
