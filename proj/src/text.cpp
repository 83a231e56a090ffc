#include "triplescore/text.hpp"

#include <cctype>

namespace ts {

namespace {

bool is_word_char(unsigned char c) {
  return c >= 0x80 || std::isalnum(c) != 0;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (is_word_char(c)) {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = text.substr(start, end - start);
    while (!piece.empty() &&
           std::isspace(static_cast<unsigned char>(piece.front())))
      piece.remove_prefix(1);
    while (!piece.empty() &&
           std::isspace(static_cast<unsigned char>(piece.back())))
      piece.remove_suffix(1);
    if (!piece.empty()) sentences.emplace_back(piece);
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      bool at_end = i + 1 == text.size();
      if (at_end || std::isspace(static_cast<unsigned char>(text[i + 1])))
        flush(i + 1);
    }
  }
  flush(text.size());
  return sentences;
}

bool contains_sequence(const std::vector<std::string>& tokens,
                       const std::vector<std::string>& trigger) {
  if (trigger.empty() || trigger.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + trigger.size() <= tokens.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < trigger.size(); ++j) {
      if (tokens[i + j] != trigger[j]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace ts
