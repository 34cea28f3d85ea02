#pragma once

// Issue checkers: map raw service output to categorical observations.
// The baselines here (lexicon and pattern matchers, a token-count
// complexity proxy) stand behind the same interface a learned checker
// would use.

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustrate/corpus.hpp"
#include "trustrate/error.hpp"
#include "trustrate/text.hpp"

namespace trustrate {

enum class IssueKind { kBias, kAbusiveLanguage, kInformationLeakage, kConversationComplexity };

inline std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::kBias: return "B";
    case IssueKind::kAbusiveLanguage: return "AL";
    case IssueKind::kInformationLeakage: return "IL";
    case IssueKind::kConversationComplexity: return "CC";
  }
  return "?";
}

inline IssueKind parse_issue_kind(std::string_view s) {
  if (s == "B") return IssueKind::kBias;
  if (s == "AL") return IssueKind::kAbusiveLanguage;
  if (s == "IL") return IssueKind::kInformationLeakage;
  if (s == "CC") return IssueKind::kConversationComplexity;
  throw InvalidArgument("unknown issue kind '" + std::string(s) + "'");
}

struct Observation {
  std::size_t case_id = 0;
  IssueKind kind = IssueKind::kBias;
  std::string outcome;
  std::optional<double> score;

  bool operator==(const Observation&) const = default;
};

inline constexpr std::string_view kFlagged = "flagged";
inline constexpr std::string_view kClean = "clean";
inline constexpr std::string_view kNeutralGender = "neutral";

// ---------------------------------------------------------------- gender

/// Counts gendered and gender-neutral word forms. Keys are the revealing
/// classes of the lexicon's attribute plus "neutral" (forms listed as NA).
class GenderDetector {
 public:
  explicit GenderDetector(const FillerLexicon& lexicon) {
    lexicon.validate();
    for (const auto& cls : lexicon.attribute.revealing_classes()) classes_.push_back(cls);
    for (const auto& [cls, forms] : lexicon.entries) {
      const std::string key = cls == kNotRevealed ? std::string(kNeutralGender) : cls;
      for (const auto& f : forms) forms_[text::to_lower(f.surface)] = key;
    }
  }

  std::map<std::string, std::size_t> counts(std::string_view s) const {
    std::map<std::string, std::size_t> out;
    for (const auto& c : classes_) out[c] = 0;
    out[std::string(kNeutralGender)] = 0;
    for (const auto& w : text::lower_words(s)) {
      auto it = forms_.find(w);
      if (it != forms_.end()) ++out[it->second];
    }
    return out;
  }

  /// Class of the single gender form in `sentence`; "neutral" when it has
  /// none; nullopt when it has more than one.
  std::optional<std::string> sentence_class(std::string_view sentence) const {
    std::optional<std::string> found;
    std::size_t hits = 0;
    for (const auto& w : text::lower_words(sentence)) {
      auto it = forms_.find(w);
      if (it == forms_.end()) continue;
      if (++hits > 1) return std::nullopt;
      found = it->second;
    }
    return found ? found : std::optional<std::string>(std::string(kNeutralGender));
  }

  const std::vector<std::string>& classes() const { return classes_; }

  /// Revealing classes followed by "neutral".
  std::vector<std::string> outcome_labels() const {
    auto out = classes_;
    out.emplace_back(kNeutralGender);
    return out;
  }

 private:
  std::vector<std::string> classes_;
  std::map<std::string, std::string> forms_;
};

inline std::map<std::string, std::size_t> detect_gender_forms(std::string_view s,
                                                              const FillerLexicon& lexicon) {
  return GenderDetector(lexicon).counts(s);
}

/// Output gender of each sentence of a two-sentence translation, or
/// nullopt when the output does not split into exactly two sentences each
/// with at most one gender form.
inline std::optional<std::pair<std::string, std::string>> translation_genders(
    std::string_view output, const GenderDetector& detector) {
  auto sentences = text::split_sentences(output);
  if (sentences.size() != 2) return std::nullopt;
  auto a = detector.sentence_class(sentences[0]);
  auto b = detector.sentence_class(sentences[1]);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

// ------------------------------------------------------------- sentiment

enum class SentimentClass { kNegative, kNeutral, kPositive };

inline std::string_view to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::kNegative: return "negative";
    case SentimentClass::kNeutral: return "neutral";
    case SentimentClass::kPositive: return "positive";
  }
  return "?";
}

inline const std::vector<std::string>& sentiment_labels() {
  static const std::vector<std::string> labels{"negative", "neutral", "positive"};
  return labels;
}

struct SentimentClassing {
  double negative_max = -0.05;
  double neutral_max = 0.05;

  void validate() const {
    if (!(negative_max >= -1.0 && neutral_max <= 1.0 && negative_max < neutral_max))
      throw InvalidArgument("sentiment thresholds must satisfy -1 <= negative-max < neutral-max <= 1");
  }
  bool operator==(const SentimentClassing&) const = default;
};

inline SentimentClass classify_sentiment(double score, const SentimentClassing& classing = {}) {
  classing.validate();
  if (!(score >= -1.0 && score <= 1.0)) throw InvalidArgument("sentiment score outside [-1, 1]");
  if (score <= classing.negative_max) return SentimentClass::kNegative;
  if (score > classing.neutral_max) return SentimentClass::kPositive;
  return SentimentClass::kNeutral;
}

// -------------------------------------------------------- abuse, leakage

class AbuseChecker {
 public:
  explicit AbuseChecker(const std::vector<std::string>& lexicon) {
    for (const auto& w : lexicon) {
      auto t = text::to_lower(text::trim(w));
      if (!t.empty()) words_.insert(std::move(t));
    }
  }
  bool flagged(std::string_view s) const {
    for (const auto& w : text::lower_words(s))
      if (words_.count(w)) return true;
    return false;
  }

 private:
  std::set<std::string> words_;
};

inline std::string_view check_abusive(std::string_view s, const AbuseChecker& checker) {
  return checker.flagged(s) ? kFlagged : kClean;
}

class LeakageChecker {
 public:
  explicit LeakageChecker(const std::vector<std::string>& patterns) {
    for (const auto& p : patterns) {
      try {
        patterns_.emplace_back(p, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw InvalidArgument("bad leakage pattern '" + p + "': " + e.what());
      }
    }
  }
  bool flagged(std::string_view s) const {
    const std::string str(s);
    for (const auto& re : patterns_)
      if (std::regex_search(str, re)) return true;
    return false;
  }

 private:
  std::vector<std::regex> patterns_;
};

inline std::string_view check_leakage(std::string_view s, const LeakageChecker& checker) {
  return checker.flagged(s) ? kFlagged : kClean;
}

// ------------------------------------------------------------ transcripts

enum class Speaker { kUser, kBot };

struct Turn {
  Speaker speaker = Speaker::kUser;
  std::string text;
  bool operator==(const Turn&) const = default;
};

using Transcript = std::vector<Turn>;

/// Alternating `user:` / `bot:` lines. Blank and '#' lines are skipped.
inline Transcript parse_transcript(std::string_view contents) {
  Transcript out;
  std::size_t lineno = 0;
  for (auto line : text::split(contents, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    std::string who = colon == std::string::npos ? "" : text::to_lower(text::trim(t.substr(0, colon)));
    if (who != "user" && who != "bot")
      throw InvalidArgument("transcript line " + std::to_string(lineno) +
                            ": expected 'user:' or 'bot:'");
    out.push_back({who == "user" ? Speaker::kUser : Speaker::kBot, text::trim(t.substr(colon + 1))});
  }
  return out;
}

inline std::string format_transcript(const Transcript& t) {
  std::string out;
  for (const auto& turn : t) {
    out += turn.speaker == Speaker::kUser ? "user: " : "bot: ";
    out += turn.text;
    out.push_back('\n');
  }
  return out;
}

/// Mean tokens per bot turn times the distinct-token ratio over all bot
/// tokens.
inline double conversation_complexity(const Transcript& transcript) {
  std::size_t turns = 0, tokens = 0;
  std::set<std::string> distinct;
  for (const auto& turn : transcript) {
    if (turn.speaker != Speaker::kBot) continue;
    ++turns;
    for (auto& w : text::lower_words(turn.text)) {
      ++tokens;
      distinct.insert(std::move(w));
    }
  }
  if (turns == 0) throw InvalidArgument("conversation complexity of a transcript with no bot turns");
  if (tokens == 0) return 0.0;
  const double mean = static_cast<double>(tokens) / static_cast<double>(turns);
  return mean * static_cast<double>(distinct.size()) / static_cast<double>(tokens);
}

// ------------------------------------------------------ individual fairness

/// Fraction of pairs whose outcomes differ.
inline double paired_flip_rate(const std::vector<std::pair<Observation, Observation>>& pairs) {
  if (pairs.empty()) throw InvalidArgument("flip rate of an empty pair list");
  const IssueKind kind = pairs.front().first.kind;
  std::size_t flips = 0;
  for (const auto& [a, b] : pairs) {
    if (a.kind != kind || b.kind != kind)
      throw InvalidArgument("flip rate over mixed issue kinds");
    if (a.outcome != b.outcome) ++flips;
  }
  return static_cast<double>(flips) / static_cast<double>(pairs.size());
}

}  // namespace trustrate
