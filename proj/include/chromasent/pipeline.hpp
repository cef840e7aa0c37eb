#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "chromasent/associate.hpp"
#include "chromasent/sentiment.hpp"

namespace chromasent {

/// Stage names in the store.
namespace stages {
inline constexpr const char* kPalettes = "palettes";
inline constexpr const char* kPaletteSkips = "palette_skips";
inline constexpr const char* kReviewsScored = "reviews_scored";
inline constexpr const char* kReviewSkips = "review_skips";
inline constexpr const char* kCompanyEmotions = "company_emotions";
inline constexpr const char* kProfiles = "profiles";
inline constexpr const char* kGroups = "groups";
inline constexpr const char* kEmotionPalettes = "emotion_palettes";
inline constexpr const char* kCommonColors = "common_colors";
inline constexpr const char* kSentimentSummary = "sentiment_summary";
inline constexpr const char* kSentimentDistribution = "sentiment_distribution";
}  // namespace stages

/// Every path and knob a command can use. Empty optional paths fall back to the bundled data.
struct RunConfig {
  std::filesystem::path companies;
  std::filesystem::path reviews;
  std::filesystem::path logos;
  std::filesystem::path store;
  std::filesystem::path color_model;
  std::filesystem::path sentiment_lexicon;
  std::filesystem::path emotion_lexicon;
  /// Report directory; defaults to `<store>/reports`.
  std::filesystem::path out;

  int k = 5;
  std::uint64_t seed = 42;
  std::size_t top_n = 10;
  bool drop_background = false;
  ClassifyMode classify_mode = ClassifyMode::Argmax;
  Weighting weighting = Weighting::Equal;
  /// Worker threads for per-company work; 0 means one per logical CPU.
  int jobs = 0;
  bool quiet = false;
};

enum ExitCode : int { kExitSuccess = 0, kExitPartial = 1, kExitFatal = 2 };

struct CommandResult {
  int exit_code = kExitSuccess;
  std::vector<std::string> warnings;
  /// One entry per skipped company, image, or review row.
  std::vector<std::string> skips;
  /// Stages left untouched because their inputs were unchanged (pipeline only).
  std::vector<std::string> reused_stages;
  std::vector<std::filesystem::path> reports;

  void merge(const CommandResult& other);
};

/// Directory holding the bundled lexicons and color model.
std::filesystem::path default_data_dir();

/// Fills unset lexicon, color-model and output paths from the defaults.
RunConfig resolve_defaults(RunConfig cfg);

enum class Command { Palette, Analyze, Associate, Report, Pipeline };

/// Validates every path the command will touch. Throws ConfigError before any work is done.
void preflight(const RunConfig& cfg, Command cmd);

// Each command validates its inputs first and throws ConfigError / StoreError on fatal problems.
// `resume` skips a stage whose recorded input fingerprint matches the current inputs.
CommandResult cmd_palette(const RunConfig& cfg, std::ostream& log, bool resume = false);
CommandResult cmd_analyze(const RunConfig& cfg, std::ostream& log, bool resume = false);
CommandResult cmd_associate(const RunConfig& cfg, std::ostream& log, bool resume = false);
CommandResult cmd_report(const RunConfig& cfg, std::ostream& log);
CommandResult cmd_pipeline(const RunConfig& cfg, std::ostream& log);

/// Runs a command, mapping library errors to exit codes and printing them to `log`.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& log);

}  // namespace chromasent
