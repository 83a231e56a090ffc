#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ts {

// Lowercased word tokens: maximal runs of alphanumeric bytes. Bytes >= 0x80
// count as word characters and are kept as-is.
std::vector<std::string> tokenize(std::string_view text);

// Splits on '.', '!' or '?' followed by whitespace or end-of-text. No
// abbreviation handling. Delimiters stay attached to their sentence;
// surrounding whitespace is trimmed; empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

// True if `trigger` (a tokenized word sequence) occurs as a contiguous
// subsequence of `tokens`.
bool contains_sequence(const std::vector<std::string>& tokens,
                       const std::vector<std::string>& trigger);

}  // namespace ts
