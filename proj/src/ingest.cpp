#include "chromasent/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>

#include "chromasent/error.hpp"

namespace chromasent {

namespace {

constexpr std::string_view kCompanyHeader[] = {"id", "name", "category", "logo_path"};
constexpr std::string_view kReviewHeader[] = {"id", "company_name", "category", "score", "text", "time"};

template <std::size_t N>
bool header_matches(const std::vector<std::string>& row, const std::string_view (&expected)[N]) {
  if (row.size() != N) return false;
  for (std::size_t i = 0; i < N; ++i) {
    std::string_view f = row[i];
    if (i == 0 && f.size() >= 3 && f.substr(0, 3) == "\xEF\xBB\xBF") f.remove_prefix(3);  // BOM
    if (f != expected[i]) return false;
  }
  return true;
}

template <std::size_t N>
std::string header_text(const std::string_view (&expected)[N]) {
  std::string s;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) s += ',';
    s += expected[i];
  }
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

int days_in_month(int y, int m) {
  static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : days[m - 1];
}

}  // namespace

std::optional<std::string> normalize_timestamp(std::string_view s) {
  // YYYY-MM-DD?HH:MM:SS
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = num(14, 2), se = num(17, 2);
  if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
  if (*mo < 1 || *mo > 12 || *d < 1 || *d > days_in_month(*y, *mo) || *h > 23 || *mi > 59 ||
      *se > 59) {
    return std::nullopt;
  }
  std::string out(s);
  out[10] = 'T';
  return out;
}

LoadResult<Company> parse_companies(std::istream& in, const std::string& source_name) {
  LoadResult<Company> result;
  CsvReader csv(in, source_name);
  std::vector<std::string> row;
  if (!csv.next(row)) {
    result.warnings.push_back(source_name + ": empty companies file");
    return result;
  }
  if (!header_matches(row, kCompanyHeader)) {
    throw ParseError(source_name, csv.record_line(), "expected header " + header_text(kCompanyHeader));
  }
  std::set<std::int64_t> ids;
  while (csv.next(row)) {
    const auto line = csv.record_line();
    if (row.size() != 4) {
      throw ParseError(source_name, line, "expected 4 fields, got " + std::to_string(row.size()));
    }
    auto id = parse_int(row[0]);
    if (!id) throw ParseError(source_name, line, "invalid company id '" + row[0] + "'");
    if (!ids.insert(*id).second) {
      throw ParseError(source_name, line, "duplicate company id " + std::to_string(*id));
    }
    if (row[1].empty()) throw ParseError(source_name, line, "empty company name");
    result.items.push_back({*id, row[1], row[2], row[3]});
  }
  if (result.items.empty()) result.warnings.push_back(source_name + ": no companies (header only)");
  return result;
}

LoadResult<Company> load_companies(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open companies file " + path.string());
  return parse_companies(in, path.string());
}

ReviewReader::ReviewReader(std::istream& in, std::string source_name)
    : csv_(in, std::move(source_name)) {}

std::optional<Review> ReviewReader::next() {
  const auto& source = csv_.source_name();
  if (!started_) {
    started_ = true;
    if (!csv_.next(fields_)) return std::nullopt;
    if (!header_matches(fields_, kReviewHeader)) {
      throw ParseError(source, csv_.record_line(), "expected header " + header_text(kReviewHeader));
    }
    header_ = true;
  }
  if (!csv_.next(fields_)) return std::nullopt;
  const auto line = csv_.record_line();
  if (fields_.size() != 6) {
    throw ParseError(source, line, "expected 6 fields, got " + std::to_string(fields_.size()));
  }
  Review r;
  auto id = parse_int(fields_[0]);
  if (!id) throw ParseError(source, line, "invalid review id '" + fields_[0] + "'");
  auto score = parse_int(fields_[3]);
  if (!score) throw ParseError(source, line, "invalid score '" + fields_[3] + "'");
  if (*score < 1 || *score > 5) {
    throw ParseError(source, line, "score " + std::to_string(*score) + " outside 1-5");
  }
  auto time = normalize_timestamp(fields_[5]);
  if (!time) throw ParseError(source, line, "invalid timestamp '" + fields_[5] + "'");

  r.id = *id;
  r.company_name = std::move(fields_[1]);
  r.category = std::move(fields_[2]);
  r.score = static_cast<int>(*score);
  r.text = std::move(fields_[4]);
  r.time = std::move(*time);
  ++rows_;

  const std::size_t row_bytes = csv_.peak_record_bytes() + r.company_name.capacity() +
                                r.category.capacity() + r.text.capacity() + r.time.capacity();
  peak_row_bytes_ = std::max(peak_row_bytes_, row_bytes);
  return r;
}

std::size_t for_each_review(const std::filesystem::path& path,
                            const std::function<void(Review&&)>& sink,
                            std::size_t* peak_row_bytes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reviews file " + path.string());
  ReviewReader reader(in, path.string());
  std::size_t n = 0;
  while (auto r = reader.next()) {
    sink(std::move(*r));
    ++n;
  }
  if (peak_row_bytes) *peak_row_bytes = reader.peak_row_bytes();
  return n;
}

LoadResult<Review> parse_reviews(std::istream& in, const std::string& source_name) {
  LoadResult<Review> result;
  ReviewReader reader(in, source_name);
  while (auto r = reader.next()) result.items.push_back(std::move(*r));
  if (!reader.saw_header()) {
    result.warnings.push_back(source_name + ": empty reviews file");
  } else if (result.items.empty()) {
    result.warnings.push_back(source_name + ": no reviews (header only)");
  }
  return result;
}

LoadResult<Review> load_reviews(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reviews file " + path.string());
  return parse_reviews(in, path.string());
}

LinkReport link_reviews(std::span<Review> reviews, std::span<const Company> companies) {
  std::unordered_map<std::string, std::int64_t> by_name;
  std::set<std::string> ambiguous;
  for (const auto& c : companies) {
    auto [it, inserted] = by_name.emplace(c.name, c.id);
    if (!inserted) ambiguous.insert(c.name);
  }
  LinkReport report;
  report.ambiguous_names.assign(ambiguous.begin(), ambiguous.end());
  for (auto& r : reviews) {
    r.company_id.reset();
    if (ambiguous.count(r.company_name)) {
      report.unmatched.push_back(r.id);
      continue;
    }
    auto it = by_name.find(r.company_name);
    if (it == by_name.end()) {
      report.unmatched.push_back(r.id);
      continue;
    }
    r.company_id = it->second;
    ++report.linked;
  }
  return report;
}

void write_companies_csv(std::ostream& out, std::span<const Company> companies) {
  write_csv_row(out, {"id", "name", "category", "logo_path"});
  for (const auto& c : companies) {
    write_csv_row(out, {std::to_string(c.id), c.name, c.category, c.logo_path});
  }
}

void write_reviews_csv(std::ostream& out, std::span<const Review> reviews) {
  write_csv_row(out, {"id", "company_name", "category", "score", "text", "time"});
  for (const auto& r : reviews) {
    write_csv_row(out, {std::to_string(r.id), r.company_name, r.category, std::to_string(r.score),
                        r.text, r.time});
  }
}

}  // namespace chromasent
