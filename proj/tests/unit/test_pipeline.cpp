#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "chromasent/error.hpp"
#include "chromasent/pipeline.hpp"
#include "chromasent/serialize.hpp"
#include "chromasent/store.hpp"
#include "test_support.hpp"

using namespace chromasent;
namespace fs = std::filesystem;

namespace {

RunConfig corpus_config(const fs::path& corpus, const fs::path& store) {
  RunConfig cfg;
  cfg.companies = corpus / "companies.csv";
  cfg.reviews = corpus / "reviews.csv";
  cfg.logos = corpus / "logos";
  cfg.store = store;
  cfg.jobs = 2;
  return cfg;
}

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("palette stage on the fixture corpus") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_palette(cfg, log);
  CHECK(r.exit_code == kExitSuccess);
  CHECK(r.skips.empty());
  Store store(cfg.store);
  const auto records = store.get_records(stages::kPalettes);
  REQUIRE(records.size() == 5);
  for (const auto& rec : records) {
    const auto mapped = decode_payload<MappedPalette>(rec.payload.at("mapped"), rec.key);
    std::set<int> ids;
    double total = 0.0;
    for (const auto& e : mapped.entries) {
      ids.insert(e.color_id);
      total += e.weight;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    for (int id : {0, 2, 14, 15}) CHECK(ids.count(id));
  }
  CHECK(log.str().find("palette 1 Tang:") != std::string::npos);
  CHECK(store.get_records(stages::kPaletteSkips).empty());

  const auto first = testing::read_text(store.stage_path(stages::kPalettes));
  cmd_palette(cfg, log);
  CHECK(testing::read_text(store.stage_path(stages::kPalettes)) == first);
}

TEST_CASE("a corrupt logo is skipped") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  testing::write_text(dir / "corpus" / "logos" / "company_3.png", "not an image");
  fs::remove(dir / "corpus" / "logos" / "company_5.png");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_palette(cfg, log);
  CHECK(r.exit_code == kExitPartial);
  CHECK(r.skips.size() == 2);
  Store store(cfg.store);
  CHECK(store.get_records(stages::kPalettes).size() == 3);
  CHECK(store.get_records(stages::kPaletteSkips).size() == 2);

  // A resumed run reports the same skips.
  const auto again = cmd_palette(cfg, log, true);
  CHECK(again.reused_stages.size() == 2);
  CHECK(again.exit_code == kExitPartial);
  CHECK(again.skips.size() == 2);
}

TEST_CASE("every logo failing is fatal") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  for (const auto& e : fs::directory_iterator(dir / "corpus" / "logos")) testing::write_text(e.path(), "junk");
  std::ostringstream log;
  CHECK(cmd_palette(corpus_config(dir / "corpus", dir / "store"), log).exit_code == kExitFatal);
}

TEST_CASE("logo lookup falls back to the company id") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  testing::write_text(dir / "corpus" / "companies.csv", "id,name,category,logo_path\n7,Seven,Food,\n");
  fs::copy_file(dir / "corpus" / "logos" / "company_1.png", dir / "corpus" / "logos" / "7.png");
  std::ostringstream log;
  const auto r = cmd_palette(corpus_config(dir / "corpus", dir / "store"), log);
  CHECK(r.exit_code == kExitSuccess);
}

TEST_CASE("analyze stage") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_analyze(cfg, log);
  CHECK(r.exit_code == kExitSuccess);
  Store store(cfg.store);
  const auto scored = store.get_records(stages::kReviewsScored);
  CHECK(scored.size() == 51);
  CHECK(store.get_records(stages::kCompanyEmotions).size() == 5);
  CHECK(store.get_records(stages::kReviewSkips).empty());
  const auto first = decode_payload<ScoredReview>(scored.front().payload, "r");
  CHECK(first.review_id == 15708);
  CHECK(first.company_id == 1);
  CHECK(first.score == 1);
}

TEST_CASE("analyze skips bad rows and unknown companies") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  {
    std::ofstream out(dir / "corpus" / "reviews.csv", std::ios::app);
    out << "1,Nobody,Food,3,hello,2023-01-01 00:00:00\n";
    out << "2,Tang,Food,9,bad score,2023-01-01 00:00:00\n";
  }
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_analyze(cfg, log);
  CHECK(r.exit_code == kExitPartial);
  CHECK(r.skips.size() == 2);
  CHECK(contains(r.skips, "Nobody"));
  CHECK(contains(r.skips, "outside 1-5"));
  CHECK(Store(cfg.store).get_records(stages::kReviewsScored).size() == 51);
}

TEST_CASE("empty reviews file gives an empty stage and a warning") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  testing::write_text(dir / "corpus" / "reviews.csv", "id,company_name,category,score,text,time\n");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_analyze(cfg, log);
  CHECK(r.exit_code == kExitSuccess);
  CHECK(r.warnings.size() == 1);
  Store store(cfg.store);
  CHECK(store.has_stage(stages::kReviewsScored));
  CHECK(store.get_records(stages::kReviewsScored).empty());

  testing::write_text(dir / "corpus" / "reviews.csv", "");
  CHECK(cmd_analyze(cfg, log).warnings.size() == 1);
}

TEST_CASE("associate and report need their prior stages") {
  testing::TempDir dir;
  RunConfig cfg;
  cfg.store = dir / "store";
  std::ostringstream log;
  try {
    cmd_associate(cfg, log);
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(std::string(e.what()).find("run `chromasent palette` first") != std::string::npos);
  }
  try {
    cmd_report(cfg, log);
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(std::string(e.what()).find("run `chromasent associate` first") != std::string::npos);
  }
  CHECK(run_command(Command::Report, cfg, log) == kExitFatal);
}

TEST_CASE("preflight rejects bad configuration before any work") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  auto cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.logos = dir / "missing-logos";
  std::ostringstream log;
  CHECK_THROWS_WITH(cmd_pipeline(cfg, log), Catch::Matchers::ContainsSubstring("logo directory not found"));
  CHECK_FALSE(fs::exists(dir / "store"));

  cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.reviews = dir / "nope.csv";
  CHECK_THROWS_AS(cmd_pipeline(cfg, log), ConfigError);
  cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.k = 0;
  CHECK_THROWS_AS(preflight(cfg, Command::Palette), ConfigError);
  cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.color_model = dir / "nope.csv";
  CHECK_THROWS_AS(preflight(cfg, Command::Report), ConfigError);
  cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.store.clear();
  CHECK_THROWS_AS(preflight(cfg, Command::Associate), ConfigError);
  CHECK_FALSE(fs::exists(dir / "store"));
}

TEST_CASE("pipeline end to end") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  const auto r = cmd_pipeline(cfg, log);
  CHECK(r.exit_code == kExitSuccess);
  CHECK(r.reports.size() == 13);
  CHECK(contains(r.warnings, "no companies lead with Angry"));

  Store store(cfg.store);
  const auto groups = store.latest_by_key(stages::kGroups);
  CHECK(groups.at("Happy").at("size") == 2);
  CHECK(groups.at("Angry").at("size") == 0);
  CHECK(store.get_records(stages::kEmotionPalettes).size() == 4);
  CHECK(store.latest_by_key(stages::kCommonColors).at("common").at("color_ids") == Json{0, 2, 14, 15});

  const auto reports = cfg.store / "reports";
  CHECK(fs::exists(reports / "pie_Happy.svg"));
  CHECK_FALSE(fs::exists(reports / "pie_Angry.svg"));

  // Second run reuses every computed stage.
  const auto snap = testing::snapshot(cfg.store);
  const auto again = cmd_pipeline(cfg, log);
  CHECK(again.reused_stages.size() == 11);
  CHECK(testing::snapshot(cfg.store) == snap);
}

TEST_CASE("changing an input reruns the affected stages only") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  cmd_pipeline(cfg, log);
  cfg.top_n = 3;
  const auto r = cmd_pipeline(cfg, log);
  CHECK(r.reused_stages.size() == 5);
  const auto rows = testing::read_csv(cfg.store / "reports" / "emotion_colors.csv");
  std::map<std::string, int> per_emotion;
  for (std::size_t i = 1; i < rows.size(); ++i) ++per_emotion[rows[i][0]];
  for (const auto& [e, n] : per_emotion) CHECK(n == 3);
}

TEST_CASE("interrupted run resumes from completed stages") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  const auto cfg = corpus_config(dir / "corpus", dir / "store");
  std::ostringstream log;
  cmd_palette(cfg, log);
  // Simulate a crash during analyze: a stray temp file and no committed stage.
  testing::write_text(cfg.store / "reviews_scored.ndjson.tmp", "partial");
  const auto r = cmd_pipeline(cfg, log);
  CHECK(r.exit_code == kExitSuccess);
  CHECK(r.reused_stages == std::vector<std::string>{stages::kPalettes, stages::kPaletteSkips});
  CHECK(Store(cfg.store).get_records(stages::kReviewsScored).size() == 51);
}

TEST_CASE("power weighting and compound mode run end to end") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  auto cfg = corpus_config(dir / "corpus", dir / "store");
  cfg.weighting = Weighting::Power;
  cfg.classify_mode = ClassifyMode::Compound;
  std::ostringstream log;
  CHECK(cmd_pipeline(cfg, log).exit_code == kExitSuccess);
  for (const auto& rec : Store(cfg.store).get_records(stages::kEmotionPalettes)) {
    CHECK(rec.payload.at("weighting") == "power");
    CHECK(std::abs(decode_payload<EmotionPalette>(rec.payload, "p").total_weight() - 1.0) <= 1e-9);
  }
}

TEST_CASE("jobs setting does not change results") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  auto cfg = corpus_config(dir / "corpus", dir / "one");
  cfg.jobs = 1;
  std::ostringstream log;
  cmd_pipeline(cfg, log);
  auto cfg8 = corpus_config(dir / "corpus", dir / "eight");
  cfg8.jobs = 8;
  cmd_pipeline(cfg8, log);
  CHECK(testing::snapshot(dir / "one", ".ndjson") == testing::snapshot(dir / "eight", ".ndjson"));
  CHECK(testing::snapshot(dir / "one" / "reports") == testing::snapshot(dir / "eight" / "reports"));
}

TEST_CASE("CLI surface") {
  testing::TempDir dir;
  testing::copy_corpus(dir / "corpus");
  const auto corpus = (dir / "corpus").string();
  const auto store = (dir / "store").string();

  const auto help = testing::run_cli({"--help"});
  CHECK(help.exit_code == 0);
  for (const char* sub : {"palette", "analyze", "associate", "report", "pipeline"}) {
    CHECK(help.output.find(sub) != std::string::npos);
  }
  const auto pipe_help = testing::run_cli({"pipeline", "--help"});
  for (const char* flag : {"--companies", "--reviews", "--logos", "--store", "--color-model", "--sentiment-lexicon",
                           "--emotion-lexicon", "--k", "--seed", "--top-n", "--drop-background", "--classify-mode",
                           "--weighting", "--jobs"}) {
    INFO(flag);
    CHECK(pipe_help.output.find(flag) != std::string::npos);
  }

  CHECK(testing::run_cli({"palette", "--store", store, "--companies", corpus + "/companies.csv", "--logos",
                          corpus + "/logos", "--k", "5", "--seed", "42"})
            .exit_code == 0);
  CHECK(testing::run_cli({"analyze", "--store", store, "--companies", corpus + "/companies.csv", "--reviews",
                          corpus + "/reviews.csv", "--classify-mode", "argmax"})
            .exit_code == 0);
  CHECK(testing::run_cli({"associate", "--store", store, "--top-n", "10", "--weighting", "equal"}).exit_code == 0);
  const auto rep = testing::run_cli({"report", "--store", store, "--out", (dir / "out").string()});
  CHECK(rep.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "emotion_colors.csv"));

  CHECK(testing::run_cli({"analyze", "--store", store, "--companies", corpus + "/companies.csv", "--reviews",
                          corpus + "/reviews.csv", "--classify-mode", "bogus"})
            .exit_code == 2);
  const auto missing = testing::run_cli({"pipeline", "--store", store, "--companies", corpus + "/companies.csv",
                                         "--reviews", corpus + "/reviews.csv", "--logos", corpus + "/nothing"});
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("logo directory not found") != std::string::npos);
  CHECK(testing::run_cli({"report", "--store", (dir / "empty").string()}).exit_code == 2);
  CHECK(testing::run_cli({}).exit_code == 2);
}
