#pragma once

// Plain-text lexicon formats and line-delimited corpus export.
//
//   filler lexicon   class<TAB>surface-form<TAB>role
//   occupations      occupation[<TAB>stereotype-class]
//   emotions         word<TAB>valence<TAB>category
//   word lists       one entry per line
//
// Blank lines and lines starting with '#' are ignored everywhere.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "trustrate/corpus.hpp"

namespace trustrate::io {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << contents;
}

/// Non-comment, non-blank lines split on tabs, each with its 1-based line number.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> records(
    std::string_view contents) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::size_t lineno = 0;
  for (auto& raw : text::split(contents, '\n')) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto t = text::trim(raw);
    if (t.empty() || t[0] == '#') continue;
    auto fields = text::split(raw, '\t');
    for (auto& f : fields) f = text::trim(f);
    out.emplace_back(lineno, std::move(fields));
  }
  return out;
}

inline FillerLexicon parse_filler_lexicon(const std::string& attribute,
                                          std::string_view contents) {
  FillerLexicon lex;
  std::vector<std::string> order;
  for (const auto& [lineno, f] : records(contents)) {
    if (f.size() != 3)
      throw InvalidArgument("lexicon line " + std::to_string(lineno) +
                            ": expected class<TAB>surface<TAB>role");
    const auto& cls = f[0];
    if (cls != kNotRevealed && std::find(order.begin(), order.end(), cls) == order.end())
      order.push_back(cls);
    lex.entries[cls].push_back({f[1], parse_filler_role(f[2])});
  }
  lex.attribute = ProtectedAttribute::from_classes(attribute, order);
  lex.validate();
  return lex;
}

inline OccupationList parse_occupations(std::string_view contents) {
  OccupationList list;
  std::map<std::string, std::string> stereo;
  for (const auto& [lineno, f] : records(contents)) {
    if (f.empty() || f.size() > 2)
      throw InvalidArgument("occupation line " + std::to_string(lineno) +
                            ": expected occupation[<TAB>class]");
    list.occupations.push_back(f[0]);
    if (f.size() == 2 && !f[1].empty()) stereo[f[0]] = f[1];
  }
  if (!stereo.empty()) list.stereotype_class = std::move(stereo);
  list.validate();
  return list;
}

inline EmotionLexicon parse_emotions(std::string_view contents) {
  EmotionLexicon lex;
  for (const auto& [lineno, f] : records(contents)) {
    if (f.size() != 3)
      throw InvalidArgument("emotion line " + std::to_string(lineno) +
                            ": expected word<TAB>valence<TAB>category");
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument(f[1]);
    } catch (const std::exception&) {
      throw InvalidArgument("emotion line " + std::to_string(lineno) + ": bad valence '" +
                            f[1] + "'");
    }
    if (!lex.entries.emplace(f[0], EmotionEntry{v, f[2]}).second)
      throw InvalidArgument("emotion word '" + f[0] + "' listed twice");
  }
  lex.validate();
  return lex;
}

inline std::vector<std::string> parse_word_list(std::string_view contents) {
  std::vector<std::string> out;
  for (auto& [lineno, f] : records(contents)) {
    (void)lineno;
    out.push_back(f[0]);
  }
  return out;
}

inline nlohmann::ordered_json case_to_json(const TestCase& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["text"] = c.text;
  j["assignment"] = nlohmann::ordered_json(c.assignment);
  j["template_id"] = c.template_id;
  j["slots"] = nlohmann::ordered_json(c.slots);
  return j;
}

/// One JSON record per line, in case-id order.
inline std::string export_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& c : corpus.cases) {
    out += case_to_json(c).dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace trustrate::io
