#include "chromasent/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <thread>
#include <unordered_map>

#include "chromasent/color.hpp"
#include "chromasent/emotion.hpp"
#include "chromasent/error.hpp"
#include "chromasent/image.hpp"
#include "chromasent/ingest.hpp"
#include "chromasent/palette.hpp"
#include "chromasent/report.hpp"
#include "chromasent/serialize.hpp"
#include "chromasent/store.hpp"

namespace chromasent {

namespace fs = std::filesystem;

void CommandResult::merge(const CommandResult& other) {
  exit_code = std::max(exit_code, other.exit_code);
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  skips.insert(skips.end(), other.skips.begin(), other.skips.end());
  reused_stages.insert(reused_stages.end(), other.reused_stages.begin(), other.reused_stages.end());
  reports.insert(reports.end(), other.reports.begin(), other.reports.end());
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("CHROMASENT_DATA_DIR"); env && *env) return env;
#ifdef CHROMASENT_DATA_DIR
  return CHROMASENT_DATA_DIR;
#else
  return "data";
#endif
}

RunConfig resolve_defaults(RunConfig cfg) {
  const fs::path data = default_data_dir();
  if (cfg.sentiment_lexicon.empty()) cfg.sentiment_lexicon = data / "sentiment_lexicon.tsv";
  if (cfg.emotion_lexicon.empty()) cfg.emotion_lexicon = data / "emotion_lexicon.tsv";
  if (cfg.out.empty() && !cfg.store.empty()) cfg.out = cfg.store / "reports";
  return cfg;
}

namespace {

// ---------------------------------------------------------------------------
// helpers

class Fingerprint {
 public:
  Fingerprint() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw ConfigError("cannot initialize SHA-256");
    }
  }

  Fingerprint& add(std::string_view s) {
    const std::string framed = std::to_string(s.size()) + ":";
    EVP_DigestUpdate(ctx_.get(), framed.data(), framed.size());
    EVP_DigestUpdate(ctx_.get(), s.data(), s.size());
    return *this;
  }

  Fingerprint& add_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return add("missing:" + p.string());
    add("file");
    char buf[1 << 15];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
      EVP_DigestUpdate(ctx_.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    return *this;
  }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    std::string out;
    char b[3];
    for (unsigned i = 0; i < len; ++i) {
      std::snprintf(b, sizeof b, "%02x", md[i]);
      out += b;
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

bool stages_current(const Store& store, std::initializer_list<const char*> names, const std::string& fp) {
  for (const char* n : names) {
    const auto recorded = store.stage_fingerprint(n);
    if (!recorded || *recorded != fp) return false;
  }
  return true;
}

int worker_count(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls f(i) for i in [0, n) on up to `jobs` threads. f must not throw.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count(jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& t : threads) t.join();
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("--") + what + " is required");
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " file not found: " + p.string());
}

void require_stage(const Store& store, const char* stage, const char* command) {
  if (!store.has_stage(stage)) {
    throw StoreError("stage '" + std::string(stage) + "' not found in " + store.dir().string() +
                     "; run `chromasent " + command + "` first");
  }
}

ColorModel model_for(const RunConfig& cfg) {
  return cfg.color_model.empty() ? ColorModel::default_model() : load_color_model(cfg.color_model);
}

std::vector<Company> sorted_companies(const RunConfig& cfg, CommandResult& result) {
  auto loaded = load_companies(cfg.companies);
  result.warnings.insert(result.warnings.end(), loaded.warnings.begin(), loaded.warnings.end());
  std::sort(loaded.items.begin(), loaded.items.end(),
            [](const Company& a, const Company& b) { return a.id < b.id; });
  return std::move(loaded.items);
}

/// Explicit logo_path (relative to the logo directory), else `<logos>/<id>.{png,jpg,jpeg}`.
fs::path logo_file(const RunConfig& cfg, const Company& c) {
  if (c.logo_path.empty()) {
    for (const char* ext : {".png", ".jpg", ".jpeg"}) {
      fs::path p = cfg.logos / (std::to_string(c.id) + ext);
      if (fs::is_regular_file(p)) return p;
    }
    return cfg.logos / (std::to_string(c.id) + ".png");
  }
  const fs::path p(c.logo_path);
  return p.is_absolute() ? p : cfg.logos / p;
}

std::string key_of(std::int64_t id) { return std::to_string(id); }

/// Re-reports the skips of a reused stage so a resumed run exits like the original one.
void restore_skips(const Store& store, const char* stage, CommandResult& result) {
  for (const auto& rec : store.get_records(stage)) {
    result.skips.push_back(rec.key + ": " + rec.payload.value("reason", std::string("skipped")));
  }
  if (!result.skips.empty()) result.exit_code = kExitPartial;
}

void report_outcome(std::ostream& log, const CommandResult& r) {
  for (const auto& w : r.warnings) log << "warning: " << w << '\n';
  for (const auto& s : r.skips) log << "skipped: " << s << '\n';
}

std::string palette_fingerprint(const RunConfig& cfg, const std::vector<Company>& companies) {
  Fingerprint fp;
  fp.add("palette/1").add(std::to_string(cfg.k)).add(std::to_string(cfg.seed));
  fp.add(cfg.drop_background ? "bg-drop" : "bg-keep");
  fp.add_file(cfg.companies);
  if (!cfg.color_model.empty()) fp.add_file(cfg.color_model);
  for (const auto& c : companies) fp.add(key_of(c.id)).add(c.logo_path).add_file(logo_file(cfg, c));
  return fp.hex();
}

std::string analyze_fingerprint(const RunConfig& cfg) {
  Fingerprint fp;
  fp.add("analyze/1").add(cfg.classify_mode == ClassifyMode::Argmax ? "argmax" : "compound");
  fp.add_file(cfg.companies).add_file(cfg.reviews).add_file(cfg.sentiment_lexicon).add_file(cfg.emotion_lexicon);
  return fp.hex();
}

std::string associate_fingerprint(const RunConfig& cfg, const Store& store) {
  Fingerprint fp;
  fp.add("associate/1").add(std::to_string(cfg.top_n)).add(to_string(cfg.weighting));
  fp.add(store.stage_fingerprint(stages::kPalettes).value_or("none"));
  fp.add(store.stage_fingerprint(stages::kReviewsScored).value_or("none"));
  return fp.hex();
}

// ---------------------------------------------------------------------------
// palette

struct PaletteOutcome {
  std::optional<Json> record;
  std::string skip;
  std::string summary;
};

PaletteOutcome extract_one(const RunConfig& cfg, const Company& c, const ColorModel& model) {
  PaletteOutcome out;
  const fs::path path = logo_file(cfg, c);
  try {
    if (!fs::is_regular_file(path)) throw InputError("logo not found: " + path.string());
    LoadOptions lo;
    lo.drop_background = cfg.drop_background;
    const PixelSet pixels = load_pixels(read_file_bytes(path), lo);
    KMeansOptions ko;
    ko.k = cfg.k;
    ko.seed = cfg.seed;
    const ClusterResult cr = kmeans_cluster(pixels, ko);
    const MappedPalette mapped = map_palette(cr.palette, model);

    Json j;
    j["company_id"] = c.id;
    j["name"] = c.name;
    j["logo"] = c.logo_path;
    j["size"] = {pixels.source_width, pixels.source_height};
    j["pixels"] = pixels.pixels.size();
    j["k"] = cfg.k;
    j["effective_k"] = cr.effective_k;
    j["objective"] = cr.objective;
    j["iterations"] = cr.iterations;
    j["converged"] = cr.converged;
    j["palette"] = cr.palette.entries;
    j["mapped"] = mapped;
    out.record = std::move(j);

    out.summary = std::to_string(c.id) + " " + c.name + ":";
    for (const auto& e : mapped.entries) {
      const NamedColor* nc = model.find(e.color_id);
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s(%d) %.3f", nc ? nc->rgb.hex().c_str() : "?", e.color_id, e.weight);
      out.summary += buf;
    }
  } catch (const Error& e) {
    out.skip = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// analyze

struct CompanyIndex {
  std::unordered_map<std::string, std::vector<std::int64_t>> by_name;
};

}  // namespace

void preflight(const RunConfig& cfg, Command cmd) {
  const bool palette = cmd == Command::Palette || cmd == Command::Pipeline;
  const bool analyze = cmd == Command::Analyze || cmd == Command::Pipeline;
  const bool report = cmd == Command::Report || cmd == Command::Pipeline;

  if (cfg.store.empty()) throw ConfigError("--store is required");
  if (fs::exists(cfg.store) && !fs::is_directory(cfg.store)) {
    throw ConfigError("store path is not a directory: " + cfg.store.string());
  }
  if (palette || analyze) require_file(cfg.companies, "companies");
  if (palette) {
    if (cfg.logos.empty()) throw ConfigError("--logos is required");
    if (!fs::is_directory(cfg.logos)) throw ConfigError("logo directory not found: " + cfg.logos.string());
    if (cfg.k < 1) throw ConfigError("--k must be at least 1");
  }
  if ((palette || report) && !cfg.color_model.empty()) require_file(cfg.color_model, "color-model");
  if (analyze) {
    require_file(cfg.reviews, "reviews");
    require_file(cfg.sentiment_lexicon, "sentiment-lexicon");
    require_file(cfg.emotion_lexicon, "emotion-lexicon");
  }
  if ((cmd == Command::Associate || cmd == Command::Pipeline) && cfg.top_n < 1) {
    throw ConfigError("--top-n must be at least 1");
  }
  if (cfg.jobs < 0) throw ConfigError("--jobs must not be negative");
}

CommandResult cmd_palette(const RunConfig& cfg_in, std::ostream& log, bool resume) {
  const RunConfig cfg = resolve_defaults(cfg_in);
  preflight(cfg, Command::Palette);
  CommandResult result;
  const ColorModel model = model_for(cfg);
  const auto companies = sorted_companies(cfg, result);
  Store store(cfg.store);

  const std::string fp = palette_fingerprint(cfg, companies);
  if (resume && stages_current(store, {stages::kPalettes, stages::kPaletteSkips}, fp)) {
    result.reused_stages = {stages::kPalettes, stages::kPaletteSkips};
    restore_skips(store, stages::kPaletteSkips, result);
    if (!companies.empty() && store.get_records(stages::kPalettes).empty()) result.exit_code = kExitFatal;
    log << "palette: inputs unchanged, reusing stored palettes\n";
    return result;
  }

  std::vector<PaletteOutcome> outcomes(companies.size());
  parallel_for(companies.size(), cfg.jobs,
               [&](std::size_t i) { outcomes[i] = extract_one(cfg, companies[i], model); });

  auto palettes = store.begin_stage(stages::kPalettes);
  auto skips = store.begin_stage(stages::kPaletteSkips);
  for (std::size_t i = 0; i < companies.size(); ++i) {
    const auto& c = companies[i];
    auto& o = outcomes[i];
    if (o.record) {
      palettes.add(key_of(c.id), *o.record);
      log << "palette " << o.summary << '\n';
    } else {
      skips.add(key_of(c.id), Json{{"company_id", c.id}, {"name", c.name}, {"reason", o.skip}});
      result.skips.push_back("company " + key_of(c.id) + " (" + c.name + "): " + o.skip);
    }
  }
  palettes.commit(fp);
  skips.commit(fp);

  if (companies.empty()) result.warnings.push_back("no companies to process");
  if (!companies.empty() && palettes.size() == 0) {
    result.exit_code = kExitFatal;
    result.warnings.push_back("every logo failed");
  } else if (!result.skips.empty()) {
    result.exit_code = kExitPartial;
  }
  log << "palette: " << palettes.size() << " palettes, " << skips.size() << " skipped\n";
  report_outcome(log, result);
  return result;
}

CommandResult cmd_analyze(const RunConfig& cfg_in, std::ostream& log, bool resume) {
  const RunConfig cfg = resolve_defaults(cfg_in);
  preflight(cfg, Command::Analyze);
  CommandResult result;
  const auto companies = sorted_companies(cfg, result);
  Store store(cfg.store);

  const std::string fp = analyze_fingerprint(cfg);
  if (resume && stages_current(store, {stages::kReviewsScored, stages::kReviewSkips, stages::kCompanyEmotions}, fp)) {
    result.reused_stages = {stages::kReviewsScored, stages::kReviewSkips, stages::kCompanyEmotions};
    restore_skips(store, stages::kReviewSkips, result);
    log << "analyze: inputs unchanged, reusing stored scores\n";
    return result;
  }

  const auto slex = SentimentLexicon::load(cfg.sentiment_lexicon);
  const auto elex = EmotionLexicon::load(cfg.emotion_lexicon);
  if (slex.duplicates() > 0) {
    result.warnings.push_back(cfg.sentiment_lexicon.string() + ": " + std::to_string(slex.duplicates()) +
                              " duplicate entries (last one wins)");
  }

  CompanyIndex index;
  for (const auto& c : companies) index.by_name[c.name].push_back(c.id);

  std::vector<ScoredReview> scored;
  std::vector<std::pair<std::string, Json>> skipped;
  std::ifstream in(cfg.reviews, std::ios::binary);
  if (!in) throw ConfigError("cannot open reviews file " + cfg.reviews.string());
  ReviewReader reader(in, cfg.reviews.string());
  std::size_t bad_rows = 0;
  for (;;) {
    std::optional<Review> r;
    try {
      r = reader.next();
    } catch (const ParseError& e) {
      if (!reader.saw_header()) throw;
      ++bad_rows;
      skipped.emplace_back("line:" + std::to_string(e.line()), Json{{"line", e.line()}, {"reason", e.what()}});
      result.skips.push_back(e.what());
      continue;
    }
    if (!r) break;
    const auto it = index.by_name.find(r->company_name);
    std::string reason;
    if (it == index.by_name.end()) {
      reason = "no company named '" + r->company_name + "'";
    } else if (it->second.size() > 1) {
      reason = "company name '" + r->company_name + "' is ambiguous";
    } else {
      r->company_id = it->second.front();
      scored.push_back(score_review(*r, slex, elex, cfg.classify_mode));
      continue;
    }
    skipped.emplace_back(key_of(r->id), Json{{"review_id", r->id}, {"company_name", r->company_name},
                                             {"reason", reason}});
    result.skips.push_back("review " + key_of(r->id) + ": " + reason);
  }
  if (!reader.saw_header()) {
    result.warnings.push_back(cfg.reviews.string() + ": empty reviews file");
  } else if (reader.rows_read() == 0 && bad_rows == 0) {
    result.warnings.push_back(cfg.reviews.string() + ": no reviews (header only)");
  }

  std::stable_sort(scored.begin(), scored.end(), [](const ScoredReview& a, const ScoredReview& b) {
    return a.review_id != b.review_id ? a.review_id < b.review_id : a.company_id < b.company_id;
  });

  auto out_reviews = store.begin_stage(stages::kReviewsScored);
  for (const auto& s : scored) out_reviews.add(key_of(s.review_id), s);
  auto out_skips = store.begin_stage(stages::kReviewSkips);
  std::stable_sort(skipped.begin(), skipped.end(),
                   [](const auto& a, const auto& b) { return a.second.dump() < b.second.dump(); });
  for (const auto& [k, v] : skipped) out_skips.add(k, v);

  std::map<std::int64_t, std::vector<ScoredReview>> by_company;
  for (const auto& s : scored) by_company[s.company_id].push_back(s);
  auto out_companies = store.begin_stage(stages::kCompanyEmotions);
  for (const auto& c : companies) {
    const auto it = by_company.find(c.id);
    const std::span<const ScoredReview> rs =
        it == by_company.end() ? std::span<const ScoredReview>() : std::span<const ScoredReview>(it->second);
    Json j = build_profile(c, rs, {});
    j.erase("mapped_palette");
    out_companies.add(key_of(c.id), j);
  }

  out_reviews.commit(fp);
  out_skips.commit(fp);
  out_companies.commit(fp);

  if (!result.skips.empty()) result.exit_code = kExitPartial;
  log << "analyze: " << scored.size() << " reviews scored, " << skipped.size() << " skipped, "
      << companies.size() << " companies\n";
  report_outcome(log, result);
  return result;
}

CommandResult cmd_associate(const RunConfig& cfg_in, std::ostream& log, bool resume) {
  const RunConfig cfg = resolve_defaults(cfg_in);
  preflight(cfg, Command::Associate);
  CommandResult result;
  Store store(cfg.store);
  require_stage(store, stages::kPalettes, "palette");
  require_stage(store, stages::kReviewsScored, "analyze");

  const std::string fp = associate_fingerprint(cfg, store);
  const auto produced = {stages::kProfiles, stages::kGroups, stages::kEmotionPalettes, stages::kCommonColors,
                         stages::kSentimentSummary, stages::kSentimentDistribution};
  if (resume && stages_current(store, produced, fp)) {
    result.reused_stages.assign(produced.begin(), produced.end());
    log << "associate: inputs unchanged, reusing stored associations\n";
    return result;
  }

  // Palette records, ordered by company id.
  std::vector<std::pair<Company, MappedPalette>> palettes;
  for (const auto& [key, payload] : store.latest_by_key(stages::kPalettes)) {
    Company c;
    c.id = decode_payload<std::int64_t>(payload.value("company_id", Json()), "palettes/" + key);
    c.name = decode_payload<std::string>(payload.value("name", Json()), "palettes/" + key);
    palettes.emplace_back(std::move(c), decode_payload<MappedPalette>(payload.value("mapped", Json()),
                                                                      "palettes/" + key));
  }
  std::sort(palettes.begin(), palettes.end(),
            [](const auto& a, const auto& b) { return a.first.id < b.first.id; });

  std::vector<ScoredReview> reviews;
  for (const auto& rec : store.get_records(stages::kReviewsScored)) {
    reviews.push_back(decode_payload<ScoredReview>(rec.payload, "reviews_scored/" + rec.key));
  }
  std::map<std::int64_t, std::vector<ScoredReview>> by_company;
  for (const auto& r : reviews) by_company[r.company_id].push_back(r);

  for (const auto& [cid, rs] : by_company) {
    const bool has_palette = std::any_of(palettes.begin(), palettes.end(),
                                         [&](const auto& p) { return p.first.id == cid; });
    if (!has_palette) {
      result.warnings.push_back("company " + key_of(cid) + " has " + std::to_string(rs.size()) +
                                " reviews but no palette; left out of associations");
    }
  }

  std::vector<CompanyProfile> profiles(palettes.size());
  parallel_for(palettes.size(), cfg.jobs, [&](std::size_t i) {
    const auto it = by_company.find(palettes[i].first.id);
    const std::span<const ScoredReview> rs =
        it == by_company.end() ? std::span<const ScoredReview>() : std::span<const ScoredReview>(it->second);
    profiles[i] = build_profile(palettes[i].first, rs, palettes[i].second);
  });

  auto out_profiles = store.begin_stage(stages::kProfiles);
  for (const auto& p : profiles) {
    out_profiles.add(key_of(p.company_id), p);
    if (p.excluded()) {
      result.warnings.push_back("company " + key_of(p.company_id) + " (" + p.name +
                                ") has no emotional signal; excluded from grouping");
    }
  }

  const auto groups = group_by_emotion(profiles);
  auto out_groups = store.begin_stage(stages::kGroups);
  auto out_palettes = store.begin_stage(stages::kEmotionPalettes);
  std::vector<EmotionPalette> emotion_palettes;
  const AggregateOptions agg{cfg.top_n, cfg.weighting};
  for (auto e : kAllEmotions) {
    const auto it = groups.find(e);
    const std::span<const CompanyProfile> members =
        it == groups.end() ? std::span<const CompanyProfile>() : std::span<const CompanyProfile>(it->second);
    Json ids = Json::array();
    for (const auto& p : members) ids.push_back(p.company_id);
    out_groups.add(std::string(to_string(e)),
                   Json{{"emotion", to_string(e)}, {"size", members.size()}, {"company_ids", ids}});
    if (auto pal = aggregate_palette(e, members, agg)) {
      Json j = *pal;
      j["top_n"] = cfg.top_n;
      j["weighting"] = to_string(cfg.weighting);
      out_palettes.add(std::string(to_string(e)), j);
      emotion_palettes.push_back(std::move(*pal));
    } else {
      result.warnings.push_back("no companies lead with " + std::string(to_string(e)) + "; palette omitted");
    }
  }

  auto out_common = store.begin_stage(stages::kCommonColors);
  Json common = Json::array();
  if (emotion_palettes.size() >= 2) {
    for (int id : common_colors(emotion_palettes)) common.push_back(id);
  } else {
    result.warnings.push_back("fewer than two emotion palettes; common colors not computed");
  }
  out_common.add("common", Json{{"palettes", emotion_palettes.size()}, {"color_ids", common}});

  auto out_summary = store.begin_stage(stages::kSentimentSummary);
  for (const auto& row : sentiment_by_rating(reviews)) out_summary.add(std::to_string(row.score), row);

  SentimentTally tally;
  for (const auto& r : reviews) ++tally[r.label];
  auto out_dist = store.begin_stage(stages::kSentimentDistribution);
  out_dist.add("all", tally);

  out_profiles.commit(fp);
  out_groups.commit(fp);
  out_palettes.commit(fp);
  out_common.commit(fp);
  out_summary.commit(fp);
  out_dist.commit(fp);

  log << "associate: " << profiles.size() << " profiles, " << emotion_palettes.size() << " emotion palettes, "
      << common.size() << " common colors\n";
  report_outcome(log, result);
  return result;
}

CommandResult cmd_report(const RunConfig& cfg_in, std::ostream& log) {
  const RunConfig cfg = resolve_defaults(cfg_in);
  preflight(cfg, Command::Report);
  CommandResult result;
  Store store(cfg.store);
  for (const char* s : {stages::kProfiles, stages::kEmotionPalettes, stages::kCommonColors,
                        stages::kSentimentSummary, stages::kSentimentDistribution}) {
    require_stage(store, s, "associate");
  }
  const ColorModel model = model_for(cfg);

  ReportInputs in;
  for (const auto& rec : store.get_records(stages::kProfiles)) {
    in.profiles.push_back(decode_payload<CompanyProfile>(rec.payload, "profiles/" + rec.key));
  }
  for (const auto& rec : store.get_records(stages::kEmotionPalettes)) {
    in.palettes.push_back(decode_payload<EmotionPalette>(rec.payload, "emotion_palettes/" + rec.key));
  }
  for (const auto& [key, payload] : store.latest_by_key(stages::kCommonColors)) {
    for (int id : decode_payload<std::vector<int>>(payload.value("color_ids", Json()), "common_colors")) {
      in.common.insert(id);
    }
  }
  for (const auto& rec : store.get_records(stages::kSentimentSummary)) {
    in.by_rating.push_back(decode_payload<RatingSummary>(rec.payload, "sentiment_summary/" + rec.key));
  }
  std::sort(in.by_rating.begin(), in.by_rating.end(),
            [](const RatingSummary& a, const RatingSummary& b) { return a.score < b.score; });
  for (const auto& [key, payload] : store.latest_by_key(stages::kSentimentDistribution)) {
    in.sentiment = decode_payload<SentimentTally>(payload, "sentiment_distribution/" + key);
  }

  result.reports = write_reports(cfg.out, in, model);
  log << "report: wrote " << result.reports.size() << " files to " << cfg.out.string() << '\n';
  return result;
}

CommandResult cmd_pipeline(const RunConfig& cfg_in, std::ostream& log) {
  const RunConfig cfg = resolve_defaults(cfg_in);
  preflight(cfg, Command::Pipeline);
  CommandResult result;
  result.merge(cmd_palette(cfg, log, true));
  if (result.exit_code == kExitFatal) return result;
  result.merge(cmd_analyze(cfg, log, true));
  result.merge(cmd_associate(cfg, log, true));
  result.merge(cmd_report(cfg, log));
  return result;
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& log) {
  std::ostream null_stream(nullptr);
  std::ostream& out = cfg.quiet ? null_stream : log;
  try {
    CommandResult r;
    switch (cmd) {
      case Command::Palette: r = cmd_palette(cfg, out); break;
      case Command::Analyze: r = cmd_analyze(cfg, out); break;
      case Command::Associate: r = cmd_associate(cfg, out); break;
      case Command::Report: r = cmd_report(cfg, out); break;
      case Command::Pipeline: r = cmd_pipeline(cfg, out); break;
    }
    return r.exit_code;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

}  // namespace chromasent
