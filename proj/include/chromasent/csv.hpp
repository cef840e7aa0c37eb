#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chromasent {

/// Streaming reader for comma-separated text with RFC 4180 quoting.
///
/// Quoted fields may contain commas, doubled quotes and line breaks. Only one
/// record is held in memory at a time; field storage is reused between records.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source_name);

  /// Reads the next record into `fields`. Returns false at end of input.
  /// Blank lines are skipped. Throws ParseError on an unterminated quote.
  bool next(std::vector<std::string>& fields);

  /// Line on which the most recently returned record started (1-based).
  std::size_t record_line() const noexcept { return record_line_; }
  const std::string& source_name() const noexcept { return source_; }

  /// Largest number of bytes buffered for a single record so far.
  std::size_t peak_record_bytes() const noexcept { return peak_record_bytes_; }

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t record_line_ = 0;
  std::size_t peak_record_bytes_ = 0;
};

/// Quotes a field when it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields);

}  // namespace chromasent
