#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace trustrate::text {

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'' ||
         c == '-';
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

/// A word token and its byte span in the source string.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Splits on anything that is not alphanumeric, apostrophe or hyphen.
/// Apostrophes and hyphens at the edges of a token are stripped.
inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_word_char(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && is_word_char(s[j])) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && (s[b] == '\'' || s[b] == '-')) ++b;
    while (e > b && (s[e - 1] == '\'' || s[e - 1] == '-')) --e;
    if (e > b) out.push_back({std::string(s.substr(b, e - b)), b, e});
    i = j;
  }
  return out;
}

inline std::vector<std::string> lower_words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s)) out.push_back(to_lower(t.text));
  return out;
}

/// Sentences terminated by '.', '!' or '?'; trailing fragment kept.
inline std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '.' || c == '!' || c == '?') {
      auto t = trim(cur);
      if (!t.empty()) out.push_back(std::move(t));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  auto t = trim(cur);
  if (!t.empty()) out.push_back(std::move(t));
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos
                                         ? std::string_view::npos
                                         : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Keeps the capitalization of `original`'s first letter on `replacement`.
inline std::string match_case(std::string_view original,
                              std::string_view replacement) {
  std::string out(replacement);
  if (!original.empty() && !out.empty()) {
    bool upper = std::isupper(static_cast<unsigned char>(original[0])) != 0;
    out[0] = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(out[0]))
                                     : std::tolower(static_cast<unsigned char>(out[0])));
  }
  return out;
}

}  // namespace trustrate::text
