#include "chromasent/text.hpp"

#include <algorithm>

namespace chromasent {

namespace {

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }
bool is_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}
bool is_joiner(unsigned char c) { return c == '\'' || c == '-'; }
bool is_sentence_punct(unsigned char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '-' ||
         c == '"' || c == '\'';
}

void split_words(std::string_view chunk, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    while (i < chunk.size() && !is_word_char(static_cast<unsigned char>(chunk[i]))) ++i;
    std::size_t j = i;
    while (j < chunk.size()) {
      const auto c = static_cast<unsigned char>(chunk[j]);
      if (is_word_char(c)) {
        ++j;
      } else if (is_joiner(c) && j + 1 < chunk.size() &&
                 is_word_char(static_cast<unsigned char>(chunk[j + 1]))) {
        j += 2;
      } else {
        break;
      }
    }
    if (j - i >= 2) out.emplace_back(chunk.substr(i, j - i));
    i = j;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    const std::string_view chunk = text.substr(i, j - i);
    i = j;
    if (chunk.empty()) continue;

    const bool has_word = std::any_of(chunk.begin(), chunk.end(), [](char c) {
      return is_word_char(static_cast<unsigned char>(c));
    });
    const bool all_punct = std::all_of(chunk.begin(), chunk.end(), [](char c) {
      return is_sentence_punct(static_cast<unsigned char>(c));
    });
    const bool emoticon_like = chunk.size() >= 2 && !all_punct &&
                               (!has_word || (chunk.size() <= 3 && !is_word_char(static_cast<unsigned char>(chunk[0]))));
    if (emoticon_like) {
      tokens.emplace_back(chunk);
    } else {
      split_words(chunk, tokens);
    }
  }
  return tokens;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_all_caps(std::string_view token) {
  bool letter = false;
  for (char c : token) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') letter = true;
  }
  return letter;
}

}  // namespace chromasent
