// Command-line front end: palette, analyze, associate, report, pipeline.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chromasent/pipeline.hpp"

namespace cs = chromasent;

namespace {

void add_common(CLI::App& sub, cs::RunConfig& cfg) {
  sub.add_option("--store", cfg.store, "Store directory for stage records")->required();
  sub.add_option("--jobs", cfg.jobs, "Worker threads (0 = logical CPUs)")->check(CLI::NonNegativeNumber);
  sub.add_flag("--quiet,-q", cfg.quiet, "Only print errors");
}

void add_palette(CLI::App& sub, cs::RunConfig& cfg) {
  sub.add_option("--companies", cfg.companies, "Companies CSV (id,name,category,logo_path)")->required();
  sub.add_option("--logos", cfg.logos, "Directory that relative logo paths resolve against")->required();
  sub.add_option("--k", cfg.k, "Clusters per logo")->capture_default_str()->check(CLI::PositiveNumber);
  sub.add_option("--seed", cfg.seed, "k-means seed")->capture_default_str();
  sub.add_flag("--drop-background", cfg.drop_background, "Drop pixels matching the dominant border color");
}

void add_color_model(CLI::App& sub, cs::RunConfig& cfg) {
  sub.add_option("--color-model", cfg.color_model, "Color model CSV (id,name,r,g,b); default: built-in 43 colors");
}

void add_analyze(CLI::App& sub, cs::RunConfig& cfg) {
  if (!sub.get_option_no_throw("--companies")) {
    sub.add_option("--companies", cfg.companies, "Companies CSV (id,name,category,logo_path)")->required();
  }
  sub.add_option("--reviews", cfg.reviews, "Reviews CSV (id,company_name,category,score,text,time)")->required();
  sub.add_option("--sentiment-lexicon", cfg.sentiment_lexicon, "Sentiment lexicon TSV (token, valence)");
  sub.add_option("--emotion-lexicon", cfg.emotion_lexicon, "Emotion lexicon TSV (token, emotion)");
  sub.add_option_function<std::string>(
         "--classify-mode",
         [&cfg](const std::string& v) {
           cfg.classify_mode = v == "compound" ? cs::ClassifyMode::Compound : cs::ClassifyMode::Argmax;
         },
         "Sentiment label rule")
      ->check(CLI::IsMember({"argmax", "compound"}))
      ->default_str("argmax");
}

void add_associate(CLI::App& sub, cs::RunConfig& cfg) {
  sub.add_option("--top-n", cfg.top_n, "Colors kept per emotion")->capture_default_str()->check(CLI::PositiveNumber);
  sub.add_option_function<std::string>(
         "--weighting", [&cfg](const std::string& v) { cfg.weighting = *cs::parse_weighting(v); },
         "Company contribution to the emotion palette")
      ->check(CLI::IsMember({"equal", "power"}))
      ->default_str("equal");
}

void add_report(CLI::App& sub, cs::RunConfig& cfg) {
  sub.add_option("--out", cfg.out, "Report directory (default: <store>/reports)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logo color palettes versus review sentiment and emotion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "chromasent 0.1.0");

  cs::RunConfig cfg;
  cs::Command command = cs::Command::Pipeline;

  auto* palette = app.add_subcommand("palette", "Extract and map logo palettes");
  add_common(*palette, cfg);
  add_palette(*palette, cfg);
  add_color_model(*palette, cfg);
  palette->callback([&] { command = cs::Command::Palette; });

  auto* analyze = app.add_subcommand("analyze", "Score reviews for sentiment and emotion");
  add_common(*analyze, cfg);
  add_analyze(*analyze, cfg);
  analyze->callback([&] { command = cs::Command::Analyze; });

  auto* associate = app.add_subcommand("associate", "Build company profiles and emotion palettes");
  add_common(*associate, cfg);
  add_associate(*associate, cfg);
  associate->callback([&] { command = cs::Command::Associate; });

  auto* report = app.add_subcommand("report", "Write tables and graphics");
  add_common(*report, cfg);
  add_color_model(*report, cfg);
  add_report(*report, cfg);
  report->callback([&] { command = cs::Command::Report; });

  auto* pipeline = app.add_subcommand("pipeline", "Run palette, analyze, associate and report");
  add_common(*pipeline, cfg);
  add_palette(*pipeline, cfg);
  add_color_model(*pipeline, cfg);
  add_analyze(*pipeline, cfg);
  add_associate(*pipeline, cfg);
  add_report(*pipeline, cfg);
  pipeline->callback([&] { command = cs::Command::Pipeline; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cs::kExitFatal;
  }
  return cs::run_command(command, cfg, std::cerr);
}
