#include "test_support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "chromasent/csv.hpp"

namespace testing {

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "chromasent-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

void write_bytes(const fs::path& p, std::span<const std::uint8_t> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

chromasent::RgbaImage make_image(int w, int h,
                                 const std::function<std::array<std::uint8_t, 4>(int, int)>& fill) {
  chromasent::RgbaImage img;
  img.width = w;
  img.height = h;
  img.rgba.resize(std::size_t(w) * std::size_t(h) * 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto px = fill(x, y);
      std::copy(px.begin(), px.end(), img.rgba.begin() + static_cast<std::ptrdiff_t>(img.index(x, y)));
    }
  }
  return img;
}

std::vector<std::uint8_t> make_png(int w, int h,
                                   const std::function<std::array<std::uint8_t, 4>(int, int)>& fill) {
  return chromasent::encode_png(make_image(w, h, fill));
}

const chromasent::SentimentLexicon& mini_sentiment() {
  static const auto lex = chromasent::SentimentLexicon::load(test_data_dir() / "mini_sentiment.tsv");
  return lex;
}

const chromasent::EmotionLexicon& mini_emotion() {
  static const auto lex = chromasent::EmotionLexicon::load(test_data_dir() / "mini_emotion.tsv");
  return lex;
}

const chromasent::SentimentLexicon& bundled_sentiment() {
  static const auto lex =
      chromasent::SentimentLexicon::load(fs::path(CHROMASENT_DATA_DIR) / "sentiment_lexicon.tsv");
  return lex;
}

const chromasent::EmotionLexicon& bundled_emotion() {
  static const auto lex = chromasent::EmotionLexicon::load(fs::path(CHROMASENT_DATA_DIR) / "emotion_lexicon.tsv");
  return lex;
}

namespace {

double wcss_of(std::span<const chromasent::RgbColor> pixels, const std::vector<int>& label, int k) {
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    double sr = 0, sg = 0, sb = 0;
    int n = 0;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (label[i] != c) continue;
      sr += pixels[i].r;
      sg += pixels[i].g;
      sb += pixels[i].b;
      ++n;
    }
    if (n == 0) continue;
    const double mr = sr / n, mg = sg / n, mb = sb / n;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (label[i] != c) continue;
      const double dr = pixels[i].r - mr, dg = pixels[i].g - mg, db = pixels[i].b - mb;
      total += dr * dr + dg * dg + db * db;
    }
  }
  return total;
}

}  // namespace

double brute_force_wcss(std::span<const chromasent::RgbColor> pixels, int k) {
  // Enumerate every labeling in [0, k)^n; n <= 8 and k <= 3 keeps this under 6561 cases.
  const std::size_t n = pixels.size();
  std::vector<int> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    best = std::min(best, wcss_of(pixels, label, k));
    std::size_t i = 0;
    while (i < n && ++label[i] == k) label[i++] = 0;
    if (i == n) break;
  }
  return best;
}

CliRun run_cli(const std::vector<std::string>& args) {
  std::string cmd = "'" + cli_path().string() + "'";
  for (const auto& a : args) {
    std::string q;
    for (char c : a) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    cmd += " '" + q + "'";
  }
  cmd += " 2>&1";
  CliRun run;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) run.output.append(buf.data(), got);
  const int status = pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

void copy_corpus(const fs::path& dir) {
  fs::create_directories(dir);
  fs::copy(corpus_dir(), dir, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir, const std::string& suffix) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir).string();
    if (!suffix.empty() && (rel.size() < suffix.size() || rel.compare(rel.size() - suffix.size(), suffix.size(), suffix) != 0)) {
      continue;
    }
    out.emplace_back(rel, read_text(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  chromasent::CsvReader csv(in, p.string());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  while (csv.next(row)) rows.push_back(row);
  return rows;
}

std::vector<SvgShape> svg_shapes(const std::string& svg) {
  static const std::regex attr(R"re(data-color-id="([^"]*)" data-weight="([^"]*)")re");
  std::vector<SvgShape> out;
  for (std::sregex_iterator it(svg.begin(), svg.end(), attr), end; it != end; ++it) {
    out.push_back({(*it)[1].str(), (*it)[2].str()});
  }
  return out;
}

}  // namespace testing
