#pragma once

// Label assignment for translators (two-stage test and sequential
// composition) and sentiment analyzers (group tests plus back-door
// confounding gap). Chatbot typing lives in chatbot.hpp.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trustrate/checkers.hpp"
#include "trustrate/corpus.hpp"
#include "trustrate/services.hpp"
#include "trustrate/stats.hpp"

namespace trustrate {

// ============================================================ translators

/// Declared in composition-table order: BS, UCS, DSBS.
enum class TranslatorLabel { kBS, kUCS, kDSBS };

inline std::string_view to_string(TranslatorLabel l) {
  switch (l) {
    case TranslatorLabel::kBS: return "BS";
    case TranslatorLabel::kUCS: return "UCS";
    case TranslatorLabel::kDSBS: return "DSBS";
  }
  return "?";
}

inline std::string_view long_name(TranslatorLabel l) {
  switch (l) {
    case TranslatorLabel::kBS: return "Biased System";
    case TranslatorLabel::kUCS: return "Unbiased Compensated System";
    case TranslatorLabel::kDSBS: return "Data-Sensitive Biased System";
  }
  return "?";
}

inline TranslatorLabel parse_translator_label(std::string_view s) {
  if (s == "BS") return TranslatorLabel::kBS;
  if (s == "UCS") return TranslatorLabel::kUCS;
  if (s == "DSBS") return TranslatorLabel::kDSBS;
  throw InvalidArgument("unknown translator label '" + std::string(s) + "'");
}

inline constexpr double kDefaultAlpha = 0.05;
inline constexpr double kDefaultMaxExclusion = 0.25;

/// Evidence gathered by one stage of the translator test.
struct StageEvidence {
  stats::ContingencyTable table;
  stats::TestResult test;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t excluded = 0;
  double exclusion_rate = 0.0;

  bool operator==(const StageEvidence&) const = default;
};

struct TranslatorRating {
  TranslatorLabel label = TranslatorLabel::kUCS;
  StageEvidence t1;
  /// Present iff label != BS.
  std::optional<StageEvidence> t2;
  double exclusion_rate = 0.0;

  bool operator==(const TranslatorRating&) const = default;
};

/// Dependence test that tolerates a constant outcome: when every
/// observation falls in one outcome class there is no dependence to detect
/// and the result is statistic 0, p = 1. Fewer than two populated input
/// classes leaves nothing to compare and is unratable.
inline stats::TestResult dependence_test(const stats::ContingencyTable& table, double alpha) {
  const auto pruned = table.pruned();
  if (pruned.row_labels.size() < 2)
    throw Unratable("fewer than two input classes observed in the evidence table");
  if (pruned.col_labels.size() < 2) {
    stats::TestResult r;
    r.statistic = 0.0;
    r.degrees_of_freedom = static_cast<int>(pruned.row_labels.size() - 1);
    r.p_value = 1.0;
    r.alpha = alpha;
    r.significant = false;
    r.min_expected = 0.0;
    r.low_expected_warning = false;
    return r;
  }
  return stats::chi_square_independence(table, alpha);
}

struct TranslatorOptions {
  double alpha = kDefaultAlpha;
  double max_exclusion = kDefaultMaxExclusion;
  CampaignOptions campaign;
};

/// Builds the (occupation stereotype class x output gender) table from the
/// invocations of one stage. Each sentence is one observation.
inline StageEvidence translator_stage_evidence(const Corpus& corpus,
                                               const std::vector<Invocation>& invocations,
                                               const OccupationList& occupations,
                                               const GenderDetector& detector,
                                               const TranslatorOptions& options) {
  std::map<std::size_t, const TestCase*> by_id;
  for (const auto& c : corpus.cases) by_id[c.id] = &c;
  StageEvidence ev;
  ev.table = stats::ContingencyTable::zeros(detector.classes(), detector.outcome_labels());
  ev.cases = invocations.size();
  std::size_t answered = 0;
  for (const auto& inv : invocations) {
    if (!inv.ok()) {
      ++ev.failures;
      continue;
    }
    ++answered;
    auto genders = translation_genders(inv.text.value_or(""), detector);
    if (!genders) {
      ++ev.excluded;
      continue;
    }
    const TestCase& c = *by_id.at(inv.case_id);
    const std::pair<const char*, const std::string*> slots[] = {
        {"occupation1", &genders->first}, {"occupation2", &genders->second}};
    for (const auto& [slot, gender] : slots) {
      const auto& occ = c.slots.at(slot);
      const std::string* stereo = occupations.stereotype_of(occ);
      if (!stereo) throw InvalidArgument("occupation '" + occ + "' has no stereotype class");
      ev.table.add(*stereo, *gender);
    }
  }
  ev.exclusion_rate = answered == 0 ? 1.0 : static_cast<double>(ev.excluded) / double(answered);
  if (ev.exclusion_rate > options.max_exclusion)
    throw Unratable("unparseable-output exclusion rate " + std::to_string(ev.exclusion_rate) +
                    " exceeds " + std::to_string(options.max_exclusion));
  ev.test = dependence_test(ev.table, options.alpha);
  return ev;
}

/// Label from stage verdicts.
inline TranslatorLabel translator_label(bool t1_significant, bool t2_significant) {
  if (t1_significant) return TranslatorLabel::kBS;
  return t2_significant ? TranslatorLabel::kDSBS : TranslatorLabel::kUCS;
}

using StageRunner = std::function<StageEvidence()>;

/// Runs T1; runs T2 only when T1 finds no bias.
inline TranslatorRating run_two_stage(const StageRunner& unbiased_stage,
                                      const StageRunner& biased_stage) {
  TranslatorRating r;
  r.t1 = unbiased_stage();
  r.exclusion_rate = r.t1.exclusion_rate;
  if (r.t1.test.significant) {
    r.label = TranslatorLabel::kBS;
    return r;
  }
  r.t2 = biased_stage();
  r.exclusion_rate = std::max(r.exclusion_rate, r.t2->exclusion_rate);
  r.label = translator_label(false, r.t2->test.significant);
  return r;
}

inline TranslatorRating rate_translator(const ServiceHandle& handle, const Corpus& unbiased,
                                        const Corpus& biased, const OccupationList& occupations,
                                        const FillerLexicon& gender_lexicon,
                                        const TranslatorOptions& options = {}) {
  if (handle.kind != ServiceKind::kTranslator)
    throw InvalidArgument("rate_translator needs a translator service");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!occupations.stereotype_class)
    throw InvalidArgument("translator rating needs the occupation stereotype map");
  const GenderDetector detector(gender_lexicon);
  auto stage = [&](const Corpus& corpus) {
    return [&handle, &corpus, &occupations, &detector, &options] {
      auto run = run_campaign_invocations(handle, corpus, options.campaign);
      return translator_stage_evidence(corpus, run.invocations, occupations, detector, options);
    };
  };
  return run_two_stage(stage(unbiased), stage(biased));
}

// ----------------------------------------------------------- composition

/// Either one label or the set of labels the algebra cannot decide between.
struct CompositionRating {
  std::set<TranslatorLabel> possible;

  bool determinate() const { return possible.size() == 1; }
  bool admits(TranslatorLabel l) const { return possible.count(l) > 0; }

  std::string to_string() const {
    if (determinate()) return std::string(trustrate::to_string(*possible.begin()));
    std::string s = "Indeterminate{";
    bool first = true;
    for (auto l : possible) {
      if (!first) s += ",";
      s += trustrate::to_string(l);
      first = false;
    }
    return s + "}";
  }

  bool operator==(const CompositionRating&) const = default;
};

/// Sequential composition, first service feeding the second.
inline CompositionRating compose_ratings(TranslatorLabel first, TranslatorLabel second) {
  using L = TranslatorLabel;
  switch (second) {
    case L::kUCS:
      return {{L::kUCS}};
    case L::kBS:
      if (first == L::kBS) return {{L::kBS, L::kUCS, L::kDSBS}};
      return {{L::kBS}};
    case L::kDSBS:
      return {{first == L::kBS ? L::kBS : L::kDSBS}};
  }
  return {{L::kBS, L::kUCS, L::kDSBS}};
}

/// Left fold over a chain; indeterminate sets propagate by union.
inline CompositionRating compose_chain(const std::vector<TranslatorLabel>& chain) {
  if (chain.empty()) throw InvalidArgument("empty composition chain");
  CompositionRating acc{{chain.front()}};
  for (std::size_t i = 1; i < chain.size(); ++i) {
    CompositionRating next;
    for (auto l : acc.possible)
      for (auto r : compose_ratings(l, chain[i]).possible) next.possible.insert(r);
    acc = std::move(next);
  }
  return acc;
}

struct PipelineRating {
  TranslatorRating first;
  TranslatorRating second;
  TranslatorRating empirical;
  CompositionRating algebraic;
  bool consistent = false;

  bool operator==(const PipelineRating&) const = default;
};

inline ServiceHandle chain(const ServiceHandle& a, const ServiceHandle& b) {
  ServiceHandle h;
  h.kind = b.kind;
  h.backend = SequenceBackend{{a, b}};
  return h;
}

/// Rates A, B and A * B; consistent iff the empirical label of the chain
/// lies in the algebraic possibility set.
inline PipelineRating rate_sequential_pipeline(const ServiceHandle& a, const ServiceHandle& b,
                                               const Corpus& unbiased, const Corpus& biased,
                                               const OccupationList& occupations,
                                               const FillerLexicon& gender_lexicon,
                                               const TranslatorOptions& options = {}) {
  if (a.kind != ServiceKind::kTranslator || b.kind != ServiceKind::kTranslator)
    throw InvalidArgument("sequential pipelines are rated over two translators");
  PipelineRating p;
  p.first = rate_translator(a, unbiased, biased, occupations, gender_lexicon, options);
  p.second = rate_translator(b, unbiased, biased, occupations, gender_lexicon, options);
  p.algebraic = compose_ratings(p.first.label, p.second.label);
  p.empirical = rate_translator(chain(a, b), unbiased, biased, occupations, gender_lexicon, options);
  p.consistent = p.algebraic.admits(p.empirical.label);
  return p;
}

// ============================================================ sentiment

enum class BiasGrade { kLow, kMedium, kHigh };

inline std::string_view to_string(BiasGrade g) {
  switch (g) {
    case BiasGrade::kLow: return "Low";
    case BiasGrade::kMedium: return "Medium";
    case BiasGrade::kHigh: return "High";
  }
  return "?";
}

inline BiasGrade parse_bias_grade(std::string_view s) {
  if (s == "Low") return BiasGrade::kLow;
  if (s == "Medium") return BiasGrade::kMedium;
  if (s == "High") return BiasGrade::kHigh;
  throw InvalidArgument("unknown bias grade '" + std::string(s) + "'");
}

struct GradeThresholds {
  double low = 0.1;
  double high = 0.3;
  void validate() const {
    if (!(low > 0.0 && low < high && high < 1.0))
      throw InvalidArgument("grade thresholds must satisfy 0 < low < high < 1");
  }
  bool operator==(const GradeThresholds&) const = default;
};

inline BiasGrade grade_for(double value, const GradeThresholds& t) {
  if (value > t.high) return BiasGrade::kHigh;
  if (value > t.low) return BiasGrade::kMedium;
  return BiasGrade::kLow;
}

struct AttributeEvidence {
  std::string attribute;
  stats::ContingencyTable table;
  stats::TestResult test;
  /// Largest pairwise total variation between class-conditional
  /// sentiment distributions.
  double tv_distance = 0.0;
  bool biased = false;

  bool operator==(const AttributeEvidence&) const = default;
};

struct ConfoundingEvidence {
  std::vector<std::string> outcomes;    // sentiment classes
  std::vector<std::string> treatments;  // emotion categories
  std::vector<std::string> strata;      // composite protected-attribute classes
  /// Raw counts [y][x][z] before smoothing.
  std::vector<double> counts;
  double pseudocount = stats::kDefaultPseudocount;
  /// Per treatment: P(Y | x) and P(Y | do(x)).
  std::vector<std::vector<double>> confounded;
  std::vector<std::vector<double>> adjusted;
  double gap = 0.0;

  bool operator==(const ConfoundingEvidence&) const = default;
};

struct SASRating {
  std::vector<AttributeEvidence> attributes;
  ConfoundingEvidence confounding;
  BiasGrade grade = BiasGrade::kLow;
  /// max(all TV distances, confounding gap)
  double grade_value = 0.0;
  std::size_t cases = 0;
  std::size_t failures = 0;

  bool operator==(const SASRating&) const = default;
};

struct SASOptions {
  SentimentClassing classing;
  double alpha = kDefaultAlpha;
  GradeThresholds thresholds;
  double pseudocount = stats::kDefaultPseudocount;
  CampaignOptions campaign;
};

/// Composite confounder label, e.g. "gender=female|race=NA".
inline std::string stratum_label(const std::map<std::string, std::string>& assignment) {
  std::string s;
  for (const auto& [attr, cls] : assignment) {
    if (!s.empty()) s += "|";
    s += attr + "=" + cls;
  }
  return s;
}

/// Rating from already collected sentiment invocations.
inline SASRating rate_sas_invocations(const Corpus& corpus, const std::vector<Invocation>& invocations,
                                      const EmotionLexicon& emotions, const SASOptions& options) {
  options.classing.validate();
  options.thresholds.validate();
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");

  std::map<std::size_t, const TestCase*> by_id;
  for (const auto& c : corpus.cases) by_id[c.id] = &c;

  struct Row {
    const TestCase* c;
    std::string sentiment;
    std::string category;
  };
  std::vector<Row> rows;
  SASRating out;
  out.cases = invocations.size();
  for (const auto& inv : invocations) {
    if (!inv.ok() || !inv.score) {
      ++out.failures;
      continue;
    }
    const TestCase* c = by_id.at(inv.case_id);
    const auto& word = c->slots.at(std::string(kEmotionSlot));
    const EmotionEntry* e = emotions.find(word);
    if (!e) throw InvalidArgument("emotion word '" + word + "' missing from the emotion lexicon");
    rows.push_back({c, std::string(to_string(classify_sentiment(*inv.score, options.classing))),
                    e->category});
  }
  if (rows.empty()) throw Unratable("no successful sentiment invocations");

  double grade_value = 0.0;
  for (const auto& [attribute, slot] : corpus.attribute_slot) {
    (void)slot;
    std::set<std::string> classes;
    for (const auto& r : rows) {
      const auto& cls = r.c->assignment.at(attribute);
      if (cls != kNotRevealed) classes.insert(cls);
    }
    AttributeEvidence ev;
    ev.attribute = attribute;
    ev.table = stats::ContingencyTable::zeros({classes.begin(), classes.end()}, sentiment_labels());
    for (const auto& r : rows) {
      const auto& cls = r.c->assignment.at(attribute);
      if (cls != kNotRevealed) ev.table.add(cls, r.sentiment);
    }
    try {
      ev.test = dependence_test(ev.table, options.alpha);
    } catch (const Unratable& e) {
      throw Unratable("attribute '" + attribute + "': " + e.what());
    }
    std::vector<std::vector<double>> dists;
    for (std::size_t i = 0; i < ev.table.row_labels.size(); ++i)
      if (ev.table.row_total(i) > 0) dists.push_back(ev.table.row_distribution(i));
    ev.tv_distance = stats::max_pairwise_tv(dists);
    ev.biased = ev.test.significant;
    grade_value = std::max(grade_value, ev.tv_distance);
    out.attributes.push_back(std::move(ev));
  }

  auto& cf = out.confounding;
  cf.outcomes = sentiment_labels();
  cf.treatments = emotions.categories();
  std::set<std::string> strata;
  for (const auto& r : rows) strata.insert(stratum_label(r.c->assignment));
  cf.strata.assign(strata.begin(), strata.end());
  cf.pseudocount = options.pseudocount;
  const std::size_t nx = cf.treatments.size(), nz = cf.strata.size();
  cf.counts.assign(cf.outcomes.size() * nx * nz, 0.0);
  auto idx = [](const std::vector<std::string>& v, const std::string& s) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
  };
  for (const auto& r : rows) {
    const auto y = idx(cf.outcomes, r.sentiment);
    const auto x = idx(cf.treatments, r.category);
    const auto z = idx(cf.strata, stratum_label(r.c->assignment));
    cf.counts[(y * nx + x) * nz + z] += 1.0;
  }
  const auto joint = stats::JointDistribution::from_counts(cf.outcomes, cf.treatments, cf.strata,
                                                           cf.counts, cf.pseudocount);
  for (std::size_t x = 0; x < nx; ++x) {
    cf.confounded.push_back(stats::conditional(joint, x));
    cf.adjusted.push_back(stats::backdoor_adjust(joint, x));
  }
  cf.gap = stats::confounding_gap(joint);
  grade_value = std::max(grade_value, cf.gap);

  out.grade_value = grade_value;
  out.grade = grade_for(grade_value, options.thresholds);
  return out;
}

inline SASRating rate_sas(const ServiceHandle& handle, const Corpus& corpus,
                          const EmotionLexicon& emotions, const SASOptions& options = {}) {
  if (handle.kind != ServiceKind::kSentiment)
    throw InvalidArgument("rate_sas needs a sentiment service");
  auto run = run_campaign_invocations(handle, corpus, options.campaign);
  return rate_sas_invocations(corpus, run.invocations, emotions, options);
}

/// Bias observations (sentiment class) keyed by case id.
inline std::map<std::size_t, Observation> sentiment_observations(
    const std::vector<Invocation>& invocations, const SentimentClassing& classing) {
  std::map<std::size_t, Observation> out;
  for (const auto& inv : invocations) {
    if (!inv.ok() || !inv.score) continue;
    out[inv.case_id] = {inv.case_id, IssueKind::kBias,
                        std::string(to_string(classify_sentiment(*inv.score, classing))),
                        inv.score};
  }
  return out;
}

/// Observation pairs for counterfactual case pairs; pairs with a failed
/// member are skipped.
inline std::vector<std::pair<Observation, Observation>> observation_pairs(
    const std::vector<std::pair<TestCase, TestCase>>& pairs,
    const std::map<std::size_t, Observation>& observations) {
  std::vector<std::pair<Observation, Observation>> out;
  for (const auto& [a, b] : pairs) {
    auto ia = observations.find(a.id);
    auto ib = observations.find(b.id);
    if (ia != observations.end() && ib != observations.end()) out.emplace_back(ia->second, ib->second);
  }
  return out;
}

}  // namespace trustrate
