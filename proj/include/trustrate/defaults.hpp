#pragma once

#include <string>
#include <vector>

#include "trustrate/corpus_io.hpp"
#include "trustrate/default_data.hpp"

namespace trustrate::defaults {

inline FillerLexicon gender_lexicon() { return io::parse_filler_lexicon("gender", kGenderLexicon); }
inline FillerLexicon race_lexicon() { return io::parse_filler_lexicon("race", kRaceLexicon); }
inline OccupationList occupations() { return io::parse_occupations(kOccupations); }
inline EmotionLexicon emotions() { return io::parse_emotions(kEmotions); }
inline std::vector<std::string> abuse_lexicon() { return io::parse_word_list(kAbuseLexicon); }
inline std::vector<std::string> pii_patterns() { return io::parse_word_list(kPiiPatterns); }
inline std::vector<std::string> probe_script() { return io::parse_word_list(kProbeScript); }

inline std::vector<SentenceTemplate> parse_templates(std::string_view contents) {
  std::vector<SentenceTemplate> out;
  for (const auto& [lineno, f] : io::records(contents)) {
    if (f.size() != 2)
      throw InvalidArgument("template line " + std::to_string(lineno) +
                            ": expected id<TAB>template");
    out.push_back({f[0], f[1]});
  }
  return out;
}

inline std::vector<SentenceTemplate> sas_templates() { return parse_templates(kSasTemplates); }

}  // namespace trustrate::defaults
