#pragma once

// Seeded generation of perturbation corpora.
//
// Two families are supported:
//  - translator corpora: two sentences, one gender pronoun and one
//    occupation each ("She is a Florist. He is a Gardener"), either exactly
//    counterbalanced (unbiased input) or stereotype-paired (biased input);
//  - sentiment corpora: the full product templates x subject fillers x
//    emotion words, each case annotated with the protected-attribute classes
//    its subject reveals.
//
// Combinatorial coverage is fixed by the inputs. The seed only permutes the
// presentation order of the cases.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trustrate/error.hpp"
#include "trustrate/random.hpp"
#include "trustrate/text.hpp"

namespace trustrate {

inline constexpr std::string_view kNotRevealed = "NA";

struct ProtectedAttribute {
  std::string name;
  /// Unique, NA last, at least two classes before it.
  std::vector<std::string> classes;

  /// Builds from the revealing classes; NA is appended.
  static ProtectedAttribute from_classes(std::string name,
                                         std::vector<std::string> revealing) {
    ProtectedAttribute a{std::move(name), std::move(revealing)};
    a.classes.emplace_back(kNotRevealed);
    a.validate();
    return a;
  }

  void validate() const {
    if (name.empty()) throw InvalidArgument("protected attribute without a name");
    std::set<std::string> seen;
    for (const auto& c : classes) {
      if (!seen.insert(c).second)
        throw InvalidArgument("duplicate class '" + c + "' in attribute " + name);
    }
    if (classes.empty() || classes.back() != kNotRevealed)
      throw InvalidArgument("attribute " + name + " must list NA last");
    if (classes.size() < 3)
      throw InvalidArgument("attribute " + name + " needs at least 2 non-NA classes");
  }

  std::vector<std::string> revealing_classes() const {
    return {classes.begin(), classes.end() - 1};
  }

  bool has_class(std::string_view c) const {
    return std::find(classes.begin(), classes.end(), c) != classes.end();
  }
};

enum class FillerRole { kSubjectPronoun, kProperNoun, kPluralNeutral, kOtherPronoun };

inline std::string_view to_string(FillerRole r) {
  switch (r) {
    case FillerRole::kSubjectPronoun: return "subject-pronoun";
    case FillerRole::kProperNoun: return "proper-noun";
    case FillerRole::kPluralNeutral: return "plural-neutral";
    case FillerRole::kOtherPronoun: return "other-pronoun";
  }
  return "?";
}

inline FillerRole parse_filler_role(std::string_view s) {
  if (s == "subject-pronoun") return FillerRole::kSubjectPronoun;
  if (s == "proper-noun") return FillerRole::kProperNoun;
  if (s == "plural-neutral") return FillerRole::kPluralNeutral;
  if (s == "other-pronoun") return FillerRole::kOtherPronoun;
  throw InvalidArgument("unknown filler role '" + std::string(s) + "'");
}

struct Filler {
  std::string surface;
  FillerRole role = FillerRole::kSubjectPronoun;
};

/// Surface forms that reveal a class of one protected attribute.
struct FillerLexicon {
  ProtectedAttribute attribute;
  std::map<std::string, std::vector<Filler>> entries;

  void validate() const {
    attribute.validate();
    std::map<std::string, std::string> owner;
    for (const auto& [cls, forms] : entries) {
      if (!attribute.has_class(cls))
        throw InvalidArgument("lexicon class '" + cls + "' not declared by " +
                              attribute.name);
      for (const auto& f : forms) {
        auto key = text::to_lower(f.surface);
        auto [it, fresh] = owner.emplace(key, cls);
        if (!fresh && it->second != cls)
          throw InvalidArgument("surface form '" + f.surface +
                                "' listed under classes " + it->second + " and " + cls);
      }
    }
    for (const auto& cls : attribute.revealing_classes()) {
      auto it = entries.find(cls);
      if (it == entries.end() || it->second.empty())
        throw InvalidArgument("class '" + cls + "' of " + attribute.name +
                              " has no surface forms");
    }
  }

  /// Case-insensitive lookup of the class a surface form reveals.
  std::optional<std::string> class_of(std::string_view surface) const {
    auto key = text::to_lower(surface);
    for (const auto& [cls, forms] : entries)
      for (const auto& f : forms)
        if (text::to_lower(f.surface) == key) return cls;
    return std::nullopt;
  }

  /// Forms of `cls` usable in the given roles, in lexicon order.
  std::vector<Filler> forms(const std::string& cls,
                            std::initializer_list<FillerRole> roles) const {
    std::vector<Filler> out;
    auto it = entries.find(cls);
    if (it == entries.end()) return out;
    for (const auto& f : it->second)
      if (std::find(roles.begin(), roles.end(), f.role) != roles.end()) out.push_back(f);
    return out;
  }
};

struct OccupationList {
  std::vector<std::string> occupations;
  /// Occupation -> stereotyped gender class. Optional; required for
  /// stereotyped corpora and for translator rating.
  std::optional<std::map<std::string, std::string>> stereotype_class;

  void validate(const ProtectedAttribute* gender = nullptr) const {
    std::set<std::string> seen;
    for (const auto& o : occupations) {
      if (o.empty()) throw InvalidArgument("empty occupation");
      if (!seen.insert(o).second) throw InvalidArgument("duplicate occupation '" + o + "'");
    }
    if (!stereotype_class) return;
    for (const auto& [occ, cls] : *stereotype_class) {
      if (cls == kNotRevealed)
        throw InvalidArgument("occupation '" + occ + "' stereotyped as NA");
      if (gender && !gender->has_class(cls))
        throw InvalidArgument("occupation '" + occ + "' stereotyped as unknown class '" +
                              cls + "'");
    }
  }

  const std::string* stereotype_of(const std::string& occupation) const {
    if (!stereotype_class) return nullptr;
    auto it = stereotype_class->find(occupation);
    return it == stereotype_class->end() ? nullptr : &it->second;
  }
};

struct EmotionEntry {
  double valence = 0.0;
  std::string category;
};

struct EmotionLexicon {
  std::map<std::string, EmotionEntry> entries;

  void validate() const {
    for (const auto& [word, e] : entries) {
      if (word.empty() || word != text::to_lower(word))
        throw InvalidArgument("emotion word '" + word + "' must be lowercase");
      if (!(e.valence >= -1.0 && e.valence <= 1.0))
        throw InvalidArgument("valence of '" + word + "' outside [-1, 1]");
      if (e.category.empty())
        throw InvalidArgument("emotion word '" + word + "' has no category");
    }
  }

  const EmotionEntry* find(std::string_view word) const {
    auto it = entries.find(text::to_lower(word));
    return it == entries.end() ? nullptr : &it->second;
  }

  std::vector<std::string> categories() const {
    std::set<std::string> s;
    for (const auto& [w, e] : entries) s.insert(e.category);
    return {s.begin(), s.end()};
  }
};

struct TestCase {
  std::size_t id = 0;
  std::string text;
  std::map<std::string, std::string> assignment;
  std::string template_id;
  std::map<std::string, std::string> slots;

  bool operator==(const TestCase&) const = default;
};

enum class BalanceMode { kBalanced, kStereotyped, kCustom };

inline std::string_view to_string(BalanceMode m) {
  switch (m) {
    case BalanceMode::kBalanced: return "balanced";
    case BalanceMode::kStereotyped: return "stereotyped";
    case BalanceMode::kCustom: return "custom";
  }
  return "?";
}

inline BalanceMode parse_balance_mode(std::string_view s) {
  if (s == "balanced") return BalanceMode::kBalanced;
  if (s == "stereotyped") return BalanceMode::kStereotyped;
  if (s == "custom") return BalanceMode::kCustom;
  throw InvalidArgument("unknown balance mode '" + std::string(s) + "'");
}

/// Substitutes `{slot}` markers. Unknown slots are an error.
inline std::string render_template(std::string_view tmpl,
                                   const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close == std::string_view::npos)
        throw InvalidArgument("unterminated slot in template '" + std::string(tmpl) + "'");
      std::string name(tmpl.substr(i + 1, close - i - 1));
      auto it = slots.find(name);
      if (it == slots.end())
        throw InvalidArgument("template slot '" + name + "' has no value");
      out += it->second;
      i = close + 1;
    } else {
      out.push_back(tmpl[i++]);
    }
  }
  return out;
}

inline std::vector<std::string> template_slots(std::string_view tmpl) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while ((i = tmpl.find('{', i)) != std::string_view::npos) {
    auto close = tmpl.find('}', i);
    if (close == std::string_view::npos)
      throw InvalidArgument("unterminated slot in template '" + std::string(tmpl) + "'");
    out.emplace_back(tmpl.substr(i + 1, close - i - 1));
    i = close + 1;
  }
  return out;
}

struct Corpus {
  std::vector<TestCase> cases;
  std::uint64_t spec_hash = 0;
  std::uint64_t seed = 0;
  BalanceMode mode = BalanceMode::kBalanced;
  /// template-id -> template text
  std::map<std::string, std::string> templates;
  /// Declared protected attributes, each with the slot whose filler carries it.
  std::map<std::string, std::string> attribute_slot;

  std::string reconstruct(const TestCase& c) const {
    auto it = templates.find(c.template_id);
    if (it == templates.end())
      throw InvalidArgument("unknown template id '" + c.template_id + "'");
    return render_template(it->second, c.slots);
  }

  std::size_t size() const { return cases.size(); }
};

namespace detail {

inline std::uint64_t digest(const std::vector<std::string>& parts) {
  std::string joined;
  for (const auto& p : parts) {
    joined += p;
    joined.push_back('\x1f');
  }
  return rng::fnv1a(joined);
}

inline void shuffle_and_number(std::vector<TestCase>& cases, std::uint64_t seed) {
  rng::shuffle(cases, rng::mix({seed, 0x636f72707573ULL}));
  for (std::size_t i = 0; i < cases.size(); ++i) cases[i].id = i;
}

}  // namespace detail

inline constexpr std::string_view kTranslatorTemplateId = "translator.two-sentence";
inline constexpr std::string_view kTranslatorTemplate =
    "{pronoun1} is a {occupation1}. {pronoun2} is a {occupation2}";

/// Suffix naming each sentence position of a translator case.
inline std::string translator_attribute(const std::string& gender_attribute, int position) {
  return gender_attribute + "@" + std::to_string(position);
}

/// Two-sentence translator corpus.
///
/// Every occupation contributes `pairs_per_occupation` x |genders| slot
/// sentences. Balanced mode fills them with each gender equally often;
/// stereotyped mode fills all of them with the occupation's stereotype
/// pronoun. Sentences are laid out with a gender rotation across
/// occupations and joined pairwise into cases, so the corpus holds
/// |occupations| x |genders| x pairs / 2 cases (rounded up, the final case
/// reusing the first sentence when the count is odd).
inline Corpus generate_translator_corpus(const OccupationList& occupations,
                                         const FillerLexicon& genders, BalanceMode mode,
                                         std::size_t pairs_per_occupation,
                                         std::uint64_t seed) {
  genders.validate();
  occupations.validate(&genders.attribute);
  if (occupations.occupations.empty()) throw InvalidArgument("empty occupation list");
  if (pairs_per_occupation < 1) throw InvalidArgument("pairs-per-occupation must be >= 1");
  if (mode == BalanceMode::kCustom)
    throw InvalidArgument("translator corpora are balanced or stereotyped");
  if (mode == BalanceMode::kStereotyped) {
    if (!occupations.stereotype_class)
      throw InvalidArgument("stereotyped mode requires a stereotype map");
    for (const auto& o : occupations.occupations)
      if (!occupations.stereotype_of(o))
        throw InvalidArgument("stereotype map has no entry for '" + o + "'");
  }

  const auto classes = genders.attribute.revealing_classes();
  std::map<std::string, std::vector<Filler>> subject_forms;
  for (const auto& cls : classes) {
    auto f = genders.forms(cls, {FillerRole::kSubjectPronoun});
    if (f.empty()) f = genders.forms(cls, {FillerRole::kProperNoun});
    if (f.empty())
      throw InvalidArgument("gender class '" + cls + "' has no subject form");
    subject_forms[cls] = std::move(f);
  }

  struct Sentence {
    std::string gender_class;
    std::string pronoun;
    std::string occupation;
  };
  const auto& occ = occupations.occupations;
  const std::size_t n_occ = occ.size();
  const std::size_t n_gen = classes.size();
  std::vector<Sentence> sentences;
  sentences.reserve(n_occ * n_gen * pairs_per_occupation);
  for (std::size_t rep = 0; rep < pairs_per_occupation; ++rep) {
    for (std::size_t shift = 0; shift < n_gen; ++shift) {
      for (std::size_t i = 0; i < n_occ; ++i) {
        const std::string& cls = mode == BalanceMode::kBalanced
                                     ? classes[(i + shift) % n_gen]
                                     : *occupations.stereotype_of(occ[i]);
        const auto& forms = subject_forms.at(cls);
        sentences.push_back({cls, forms[rep % forms.size()].surface, occ[i]});
      }
    }
  }
  if (sentences.size() % 2 == 1) sentences.push_back(sentences.front());

  const std::string attr1 = translator_attribute(genders.attribute.name, 1);
  const std::string attr2 = translator_attribute(genders.attribute.name, 2);
  std::vector<TestCase> cases;
  for (std::size_t k = 0; k + 1 < sentences.size(); k += 2) {
    const auto& a = sentences[k];
    const auto& b = sentences[k + 1];
    TestCase c;
    c.template_id = std::string(kTranslatorTemplateId);
    c.slots = {{"pronoun1", a.pronoun},
               {"occupation1", a.occupation},
               {"pronoun2", b.pronoun},
               {"occupation2", b.occupation}};
    c.text = render_template(kTranslatorTemplate, c.slots);
    c.assignment = {{attr1, a.gender_class}, {attr2, b.gender_class}};
    cases.push_back(std::move(c));
  }
  detail::shuffle_and_number(cases, seed);

  std::vector<std::string> parts{"translator", std::string(to_string(mode)),
                                 std::to_string(pairs_per_occupation),
                                 genders.attribute.name};
  for (const auto& o : occ) {
    parts.push_back(o);
    if (auto s = occupations.stereotype_of(o)) parts.push_back(*s);
  }
  for (const auto& [cls, forms] : genders.entries)
    for (const auto& f : forms) parts.push_back(cls + "=" + f.surface);

  Corpus corpus;
  corpus.cases = std::move(cases);
  corpus.spec_hash = detail::digest(parts);
  corpus.seed = seed;
  corpus.mode = mode;
  corpus.templates = {{std::string(kTranslatorTemplateId), std::string(kTranslatorTemplate)}};
  corpus.attribute_slot = {{attr1, "pronoun1"}, {attr2, "pronoun2"}};
  return corpus;
}

/// A sentiment template. Slots: {subject}, {emotion}, and the optional
/// agreement slots {be} (is/are) and {was} (was/were).
struct SentenceTemplate {
  std::string id;
  std::string text;
};

inline constexpr std::string_view kSubjectSlot = "subject";
inline constexpr std::string_view kEmotionSlot = "emotion";

/// Subject filler with the class it reveals for every declared attribute.
struct SubjectFiller {
  Filler filler;
  std::map<std::string, std::string> assignment;
};

/// Union of the subject-capable forms of all lexicons, in lexicon order.
/// Attributes a form does not appear in are assigned NA.
inline std::vector<SubjectFiller> subject_fillers(const std::vector<FillerLexicon>& lexicons) {
  std::vector<SubjectFiller> out;
  std::map<std::string, std::size_t> index;
  for (const auto& lex : lexicons) {
    for (const auto& cls : lex.attribute.classes) {
      for (const auto& f : lex.forms(cls, {FillerRole::kSubjectPronoun, FillerRole::kProperNoun,
                                           FillerRole::kPluralNeutral})) {
        auto key = text::to_lower(f.surface);
        if (index.emplace(key, out.size()).second) out.push_back({f, {}});
      }
    }
  }
  for (auto& sf : out)
    for (const auto& lex : lexicons)
      sf.assignment[lex.attribute.name] =
          lex.class_of(sf.filler.surface).value_or(std::string(kNotRevealed));
  return out;
}

/// Full product templates x subject fillers x emotion words.
inline Corpus generate_sas_corpus(const std::vector<SentenceTemplate>& templates,
                                  const std::vector<FillerLexicon>& lexicons,
                                  const EmotionLexicon& emotions, std::uint64_t seed) {
  if (templates.empty()) throw InvalidArgument("no sentence templates");
  if (lexicons.empty()) throw InvalidArgument("no filler lexicons");
  emotions.validate();
  if (emotions.entries.empty()) throw InvalidArgument("empty emotion lexicon");
  std::set<std::string> attr_names;
  for (const auto& lex : lexicons) {
    lex.validate();
    if (!attr_names.insert(lex.attribute.name).second)
      throw InvalidArgument("attribute '" + lex.attribute.name + "' declared twice");
  }
  std::set<std::string> ids;
  for (const auto& t : templates) {
    if (!ids.insert(t.id).second) throw InvalidArgument("duplicate template id '" + t.id + "'");
    auto slots = template_slots(t.text);
    auto n_subject = std::count(slots.begin(), slots.end(), kSubjectSlot);
    auto n_emotion = std::count(slots.begin(), slots.end(), kEmotionSlot);
    if (n_subject != 1)
      throw InvalidArgument("template '" + t.id + "' must have exactly one {subject} slot");
    if (n_emotion != 1)
      throw InvalidArgument("template '" + t.id + "' must have exactly one {emotion} slot");
    for (const auto& s : slots)
      if (s != kSubjectSlot && s != kEmotionSlot && s != "be" && s != "was")
        throw InvalidArgument("template '" + t.id + "' has unknown slot {" + s + "}");
  }

  const auto fillers = subject_fillers(lexicons);
  std::vector<TestCase> cases;
  cases.reserve(templates.size() * fillers.size() * emotions.entries.size());
  for (const auto& t : templates) {
    auto slots_in = template_slots(t.text);
    auto uses = [&](std::string_view s) {
      return std::find(slots_in.begin(), slots_in.end(), s) != slots_in.end();
    };
    for (const auto& sf : fillers) {
      const bool plural = sf.filler.role == FillerRole::kPluralNeutral;
      for (const auto& [word, entry] : emotions.entries) {
        TestCase c;
        c.template_id = t.id;
        c.slots = {{std::string(kSubjectSlot), sf.filler.surface},
                   {std::string(kEmotionSlot), word}};
        if (uses("be")) c.slots["be"] = plural ? "are" : "is";
        if (uses("was")) c.slots["was"] = plural ? "were" : "was";
        c.text = render_template(t.text, c.slots);
        c.assignment = sf.assignment;
        cases.push_back(std::move(c));
      }
    }
  }

  // Balanced iff every revealing class of every attribute has the same
  // number of subject fillers.
  BalanceMode mode = BalanceMode::kBalanced;
  for (const auto& lex : lexicons) {
    std::map<std::string, std::size_t> per_class;
    for (const auto& sf : fillers) {
      const auto& cls = sf.assignment.at(lex.attribute.name);
      if (cls != kNotRevealed) ++per_class[cls];
    }
    std::set<std::size_t> distinct;
    for (const auto& cls : lex.attribute.revealing_classes()) distinct.insert(per_class[cls]);
    if (distinct.size() > 1) mode = BalanceMode::kCustom;
  }

  detail::shuffle_and_number(cases, seed);

  std::vector<std::string> parts{"sas"};
  Corpus corpus;
  for (const auto& t : templates) {
    parts.push_back(t.id + "=" + t.text);
    corpus.templates[t.id] = t.text;
  }
  for (const auto& lex : lexicons)
    for (const auto& [cls, forms] : lex.entries)
      for (const auto& f : forms)
        parts.push_back(lex.attribute.name + ":" + cls + "=" + f.surface + "/" +
                        std::string(to_string(f.role)));
  for (const auto& [w, e] : emotions.entries)
    parts.push_back(w + "=" + std::to_string(e.valence) + "/" + e.category);
  for (const auto& lex : lexicons)
    corpus.attribute_slot[lex.attribute.name] = std::string(kSubjectSlot);
  corpus.cases = std::move(cases);
  corpus.spec_hash = detail::digest(parts);
  corpus.seed = seed;
  corpus.mode = mode;
  return corpus;
}

/// Counterfactual pairs for one attribute: same template and identical
/// slots except the attribute's filler slot, the two fillers revealing
/// different (non-NA) classes of `attribute` and equal classes of every
/// other attribute. Pairs are (lower id, higher id), sorted.
inline std::vector<std::pair<TestCase, TestCase>> counterfactual_pairs(
    const Corpus& corpus, const std::string& attribute) {
  auto slot_it = corpus.attribute_slot.find(attribute);
  if (slot_it == corpus.attribute_slot.end())
    throw InvalidArgument("attribute '" + attribute + "' not declared by the corpus");
  const std::string& slot = slot_it->second;

  std::map<std::string, std::vector<const TestCase*>> groups;
  for (const auto& c : corpus.cases) {
    if (c.slots.find(slot) == c.slots.end())
      throw InvalidArgument("case " + std::to_string(c.id) + " has no slot record for " + slot);
    std::string key = c.template_id;
    for (const auto& [name, value] : c.slots) {
      if (name == slot) continue;
      key += '\x1f' + name + '=' + value;
    }
    for (const auto& [attr, cls] : c.assignment) {
      if (attr == attribute) continue;
      key += '\x1e' + attr + '=' + cls;
    }
    groups[key].push_back(&c);
  }

  std::vector<std::pair<std::size_t, std::size_t>> ids;
  std::map<std::size_t, const TestCase*> by_id;
  for (const auto& [key, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto& a = members[i]->assignment.at(attribute);
        const auto& b = members[j]->assignment.at(attribute);
        if (a == b || a == kNotRevealed || b == kNotRevealed) continue;
        auto lo = std::min(members[i]->id, members[j]->id);
        auto hi = std::max(members[i]->id, members[j]->id);
        ids.emplace_back(lo, hi);
        by_id[members[i]->id] = members[i];
        by_id[members[j]->id] = members[j];
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::pair<TestCase, TestCase>> out;
  out.reserve(ids.size());
  for (auto [lo, hi] : ids) out.emplace_back(*by_id.at(lo), *by_id.at(hi));
  return out;
}

}  // namespace trustrate
