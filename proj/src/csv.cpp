#include "chromasent/csv.hpp"

#include <algorithm>

#include "chromasent/error.hpp"

namespace chromasent {

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

bool CsvReader::next(std::vector<std::string>& fields) {
  for (;;) {
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (!line_.empty()) break;
  }
  record_line_ = line_no_;

  std::size_t used = 0;
  std::size_t record_bytes = line_.size();
  auto field_at = [&](std::size_t i) -> std::string& {
    if (i >= fields.size()) fields.emplace_back();
    fields[i].clear();
    return fields[i];
  };

  std::string* cur = &field_at(used++);
  bool quoted = false;
  bool field_start = true;
  std::size_t i = 0;
  for (;;) {
    if (i == line_.size()) {
      if (!quoted) break;
      // Line break inside a quoted field: continue with the next physical line.
      if (!std::getline(in_, line_)) {
        throw ParseError(source_, record_line_, "unterminated quoted field");
      }
      ++line_no_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      record_bytes += line_.size() + 1;
      cur->push_back('\n');
      i = 0;
      continue;
    }
    const char c = line_[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line_.size() && line_[i] == '"') {
          cur->push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur->push_back(c);
      }
    } else if (c == ',') {
      cur = &field_at(used++);
      field_start = true;
      continue;
    } else if (c == '"' && field_start) {
      quoted = true;
    } else {
      cur->push_back(c);
    }
    field_start = false;
  }
  fields.resize(used);
  peak_record_bytes_ = std::max(peak_record_bytes_, record_bytes);
  return true;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out << ',';
    first = false;
    out << csv_escape(f);
  }
  out << '\n';
}

}  // namespace chromasent
