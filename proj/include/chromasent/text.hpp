#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chromasent {

/// Splits review text into word and emoticon tokens.
///
/// Whitespace separates chunks. A chunk without letters or digits (":)", ":-(") is kept
/// whole as an emoticon unless it is pure sentence punctuation. Other chunks are split
/// on punctuation, keeping apostrophes and hyphens inside words ("don't", "well-made").
/// Tokens keep their original case; single-character tokens are dropped. Bytes >= 0x80
/// are treated as letters so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

/// ASCII lowercase copy.
std::string to_lower(std::string_view s);

/// True when the token has at least one ASCII letter and no lowercase ASCII letters.
bool is_all_caps(std::string_view token);

}  // namespace chromasent
