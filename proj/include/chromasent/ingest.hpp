#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chromasent/csv.hpp"

namespace chromasent {

struct Company {
  std::int64_t id = 0;
  std::string name;
  std::string category;
  std::string logo_path;

  friend bool operator==(const Company&, const Company&) = default;
};

struct Review {
  std::int64_t id = 0;
  /// Set once the review is linked to a company (see link_reviews).
  std::optional<std::int64_t> company_id;
  std::string company_name;
  std::string category;
  int score = 0;  // 1..5
  std::string text;
  /// ISO-8601, "YYYY-MM-DDTHH:MM:SS".
  std::string time;

  friend bool operator==(const Review&, const Review&) = default;
};

template <typename T>
struct LoadResult {
  std::vector<T> items;
  std::vector<std::string> warnings;
};

/// Accepts "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DDTHH:MM:SS" and returns the ISO-8601 form.
/// Returns nullopt for anything else, including out-of-range fields.
std::optional<std::string> normalize_timestamp(std::string_view s);

/// Reads `id,name,category,logo_path`. Throws ParseError for malformed rows or duplicate ids.
LoadResult<Company> load_companies(const std::filesystem::path& path);
LoadResult<Company> parse_companies(std::istream& in, const std::string& source_name = "<stream>");

/// Streaming reader for `id,company_name,category,score,text,time` files.
///
/// Rows are produced one at a time; only the current row is buffered.
class ReviewReader {
 public:
  ReviewReader(std::istream& in, std::string source_name);

  /// Next valid review, or nullopt at end of input. Throws ParseError on a bad row.
  std::optional<Review> next();

  /// Bytes buffered for the largest row so far (raw row plus parsed fields).
  std::size_t peak_row_bytes() const noexcept { return peak_row_bytes_; }
  std::size_t rows_read() const noexcept { return rows_; }
  bool saw_header() const noexcept { return header_; }

 private:
  CsvReader csv_;
  std::vector<std::string> fields_;
  bool header_ = false;
  bool started_ = false;
  std::size_t rows_ = 0;
  std::size_t peak_row_bytes_ = 0;
};

/// Calls `sink` for every review in the file without materializing the whole file.
/// Returns the number of rows delivered.
std::size_t for_each_review(const std::filesystem::path& path,
                            const std::function<void(Review&&)>& sink,
                            std::size_t* peak_row_bytes = nullptr);

LoadResult<Review> load_reviews(const std::filesystem::path& path);
LoadResult<Review> parse_reviews(std::istream& in, const std::string& source_name = "<stream>");

struct LinkReport {
  std::size_t linked = 0;
  /// Review ids whose company name matched no company.
  std::vector<std::int64_t> unmatched;
  /// Names shared by more than one company; reviews naming them stay unlinked.
  std::vector<std::string> ambiguous_names;
};

/// Fills Review::company_id by exact company-name match.
LinkReport link_reviews(std::span<Review> reviews, std::span<const Company> companies);

void write_companies_csv(std::ostream& out, std::span<const Company> companies);
void write_reviews_csv(std::ostream& out, std::span<const Review> reviews);

}  // namespace chromasent
