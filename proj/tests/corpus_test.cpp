#include <gtest/gtest.h>

#include <set>

#include "trustrate/corpus.hpp"
#include "trustrate/corpus_io.hpp"
#include "trustrate/defaults.hpp"

namespace trustrate {
namespace {

OccupationList two_occupations() {
  OccupationList o;
  o.occupations = {"Florist", "Gardener"};
  o.stereotype_class = std::map<std::string, std::string>{{"Florist", "female"}, {"Gardener", "male"}};
  return o;
}

std::map<std::string, std::size_t> sentence_genders(const Corpus& c) {
  std::map<std::string, std::size_t> n;
  for (const auto& tc : c.cases)
    for (const auto& [attr, cls] : tc.assignment) ++n[cls];
  return n;
}

TEST(ProtectedAttributeTest, Validation) {
  EXPECT_NO_THROW(ProtectedAttribute::from_classes("gender", {"female", "male"}));
  EXPECT_THROW(ProtectedAttribute::from_classes("gender", {"female"}), InvalidArgument);
  EXPECT_THROW(ProtectedAttribute::from_classes("gender", {"female", "female"}), InvalidArgument);
  ProtectedAttribute bad{"gender", {"NA", "female", "male"}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(FillerLexiconTest, RejectsFormInTwoClasses) {
  auto lex = defaults::gender_lexicon();
  lex.entries["male"].push_back({"she", FillerRole::kSubjectPronoun});
  EXPECT_THROW(lex.validate(), InvalidArgument);
}

TEST(FillerLexiconTest, ClassOfIsCaseInsensitive) {
  const auto lex = defaults::gender_lexicon();
  EXPECT_EQ(lex.class_of("SHE"), "female");
  EXPECT_EQ(lex.class_of("himself"), "male");
  EXPECT_EQ(lex.class_of("they"), "NA");
  EXPECT_FALSE(lex.class_of("nurse"));
}

TEST(TemplateTest, RenderAndSlots) {
  EXPECT_EQ(render_template("{a} and {b}", {{"a", "x"}, {"b", "y"}}), "x and y");
  EXPECT_THROW(render_template("{a}", {}), InvalidArgument);
  EXPECT_THROW(render_template("{a", {{"a", "x"}}), InvalidArgument);
  EXPECT_EQ(template_slots("{subject} {was} {emotion}."),
            (std::vector<std::string>{"subject", "was", "emotion"}));
}

TEST(TranslatorCorpusTest, SingleOccupationGivesOneCase) {
  OccupationList o;
  o.occupations = {"Florist"};
  auto c = generate_translator_corpus(o, defaults::gender_lexicon(), BalanceMode::kBalanced, 1, 0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.cases[0].text, "She is a Florist. He is a Florist");
  auto n = sentence_genders(c);
  EXPECT_EQ(n["female"], 1u);
  EXPECT_EQ(n["male"], 1u);
}

TEST(TranslatorCorpusTest, BalancedCountsMatchCombinatorics) {
  const auto occ = defaults::occupations();
  const auto gender = defaults::gender_lexicon();
  for (std::size_t pairs : {1u, 3u, 10u}) {
    auto c = generate_translator_corpus(occ, gender, BalanceMode::kBalanced, pairs, 42);
    EXPECT_EQ(c.size(), occ.occupations.size() * 2 * pairs / 2);
    auto n = sentence_genders(c);
    EXPECT_EQ(n["female"], occ.occupations.size() * pairs);
    EXPECT_EQ(n["male"], occ.occupations.size() * pairs);
  }
}

TEST(TranslatorCorpusTest, BalancedIsExactlyCounterbalancedPerOccupation) {
  const auto occ = defaults::occupations();
  auto c = generate_translator_corpus(occ, defaults::gender_lexicon(), BalanceMode::kBalanced, 4, 9);
  std::map<std::pair<std::string, std::string>, int> n;
  for (const auto& tc : c.cases) {
    ++n[{tc.slots.at("occupation1"), tc.assignment.at("gender@1")}];
    ++n[{tc.slots.at("occupation2"), tc.assignment.at("gender@2")}];
  }
  for (const auto& o : occ.occupations) {
    EXPECT_EQ((n[{o, "female"}]), 4);
    EXPECT_EQ((n[{o, "male"}]), 4);
  }
}

TEST(TranslatorCorpusTest, StereotypedPairsEveryOccupationWithItsStereotype) {
  const auto occ = defaults::occupations();
  auto c = generate_translator_corpus(occ, defaults::gender_lexicon(), BalanceMode::kStereotyped, 2, 3);
  EXPECT_EQ(c.mode, BalanceMode::kStereotyped);
  for (const auto& tc : c.cases) {
    EXPECT_EQ(tc.assignment.at("gender@1"), *occ.stereotype_of(tc.slots.at("occupation1")));
    EXPECT_EQ(tc.assignment.at("gender@2"), *occ.stereotype_of(tc.slots.at("occupation2")));
  }
}

TEST(TranslatorCorpusTest, Errors) {
  const auto gender = defaults::gender_lexicon();
  EXPECT_THROW(generate_translator_corpus({}, gender, BalanceMode::kBalanced, 1, 0), InvalidArgument);
  OccupationList plain;
  plain.occupations = {"Nurse"};
  EXPECT_THROW(generate_translator_corpus(plain, gender, BalanceMode::kStereotyped, 1, 0), InvalidArgument);
  EXPECT_THROW(generate_translator_corpus(two_occupations(), gender, BalanceMode::kCustom, 1, 0),
               InvalidArgument);
  EXPECT_THROW(generate_translator_corpus(two_occupations(), gender, BalanceMode::kBalanced, 0, 0),
               InvalidArgument);
}

TEST(TranslatorCorpusTest, SeedOnlyPermutes) {
  const auto occ = defaults::occupations();
  const auto gender = defaults::gender_lexicon();
  auto a = generate_translator_corpus(occ, gender, BalanceMode::kBalanced, 5, 1);
  auto b = generate_translator_corpus(occ, gender, BalanceMode::kBalanced, 5, 1);
  auto c = generate_translator_corpus(occ, gender, BalanceMode::kBalanced, 5, 2);
  EXPECT_EQ(a.cases, b.cases);
  EXPECT_EQ(a.spec_hash, c.spec_hash);
  std::multiset<std::string> ta, tc;
  for (const auto& x : a.cases) ta.insert(x.text);
  for (const auto& x : c.cases) tc.insert(x.text);
  EXPECT_EQ(ta, tc);
  std::vector<std::string> oa, oc;
  for (const auto& x : a.cases) oa.push_back(x.text);
  for (const auto& x : c.cases) oc.push_back(x.text);
  EXPECT_NE(oa, oc);
}

TEST(TranslatorCorpusTest, TextReconstructsFromTemplateAndSlots) {
  auto c = generate_translator_corpus(defaults::occupations(), defaults::gender_lexicon(),
                                      BalanceMode::kBalanced, 3, 5);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c.cases[i].id, i);
    EXPECT_EQ(c.reconstruct(c.cases[i]), c.cases[i].text);
  }
}

TEST(SasCorpusTest, FullProduct) {
  const auto t = defaults::sas_templates();
  const auto e = defaults::emotions();
  auto c = generate_sas_corpus(t, {defaults::gender_lexicon(), defaults::race_lexicon()}, e, 7);
  // She, He, They plus 20 names.
  EXPECT_EQ(c.size(), t.size() * 23 * e.entries.size());
  EXPECT_EQ(c.mode, BalanceMode::kBalanced);
  std::set<std::string> texts;
  for (const auto& tc : c.cases) {
    texts.insert(tc.text);
    EXPECT_EQ(c.reconstruct(tc), tc.text);
    EXPECT_EQ(tc.assignment.size(), 2u);
  }
  EXPECT_EQ(texts.size(), c.size());
}

TEST(SasCorpusTest, AgreementSlots) {
  auto c = generate_sas_corpus(defaults::sas_templates(), {defaults::gender_lexicon()},
                               defaults::emotions(), 1);
  bool saw_they = false;
  for (const auto& tc : c.cases) {
    if (tc.slots.at("subject") != "They") continue;
    saw_they = true;
    EXPECT_EQ(tc.text.find(" was "), std::string::npos) << tc.text;
    EXPECT_EQ(tc.text.find(" is "), std::string::npos) << tc.text;
  }
  EXPECT_TRUE(saw_they);
}

TEST(SasCorpusTest, UnequalClassSizesAreCustom) {
  auto g = defaults::gender_lexicon();
  g.entries["female"].push_back({"Zoe", FillerRole::kProperNoun});
  auto c = generate_sas_corpus(defaults::sas_templates(), {g}, defaults::emotions(), 1);
  EXPECT_EQ(c.mode, BalanceMode::kCustom);
}

TEST(SasCorpusTest, RejectsBadTemplates) {
  const auto g = defaults::gender_lexicon();
  const auto e = defaults::emotions();
  EXPECT_THROW(generate_sas_corpus({{"x", "{subject} is fine."}}, {g}, e, 0), InvalidArgument);
  EXPECT_THROW(generate_sas_corpus({{"x", "{subject} {emotion} {mood}"}}, {g}, e, 0), InvalidArgument);
  EXPECT_THROW(generate_sas_corpus({}, {g}, e, 0), InvalidArgument);
}

TEST(CounterfactualPairsTest, CountsMatchLexiconStructure) {
  const auto t = defaults::sas_templates();
  const auto e = defaults::emotions();
  auto c = generate_sas_corpus(t, {defaults::gender_lexicon(), defaults::race_lexicon()}, e, 11);
  const std::size_t cells = t.size() * e.entries.size();
  // gender: She/He (race NA) plus 5 x 5 names within each race class.
  EXPECT_EQ(counterfactual_pairs(c, "gender").size(), cells * (1 + 25 + 25));
  // race: 5 x 5 names within each gender class.
  EXPECT_EQ(counterfactual_pairs(c, "race").size(), cells * 50);
  EXPECT_THROW(counterfactual_pairs(c, "age"), InvalidArgument);
}

TEST(CounterfactualPairsTest, PairsDifferOnlyInTheAttributeSlot) {
  auto c = generate_sas_corpus(defaults::sas_templates(),
                               {defaults::gender_lexicon(), defaults::race_lexicon()},
                               defaults::emotions(), 4);
  auto pairs = counterfactual_pairs(c, "gender");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    EXPECT_LT(a.id, b.id);
    if (i) {
      EXPECT_LT(std::make_pair(pairs[i - 1].first.id, pairs[i - 1].second.id), std::make_pair(a.id, b.id));
    }
    EXPECT_EQ(a.template_id, b.template_id);
    EXPECT_EQ(a.slots.at("emotion"), b.slots.at("emotion"));
    EXPECT_NE(a.assignment.at("gender"), b.assignment.at("gender"));
    EXPECT_EQ(a.assignment.at("race"), b.assignment.at("race"));
  }
}

TEST(CorpusIoTest, ParsesLexiconFiles) {
  auto lex = io::parse_filler_lexicon("gender", "# c\nfemale\tShe\tsubject-pronoun\nmale\tHe\tsubject-pronoun\n\n");
  EXPECT_EQ(lex.attribute.classes, (std::vector<std::string>{"female", "male", "NA"}));
  EXPECT_THROW(io::parse_filler_lexicon("gender", "female\tShe\n"), InvalidArgument);
  auto occ = io::parse_occupations("Nurse\tfemale\nPilot\tmale\n");
  EXPECT_EQ(*occ.stereotype_of("Pilot"), "male");
  auto em = io::parse_emotions("sad\t-0.5\tnegative\n");
  EXPECT_DOUBLE_EQ(em.find("SAD")->valence, -0.5);
  EXPECT_THROW(io::parse_emotions("sad\tx\tnegative\n"), InvalidArgument);
}

TEST(CorpusIoTest, JsonlHasOneLinePerCase) {
  auto c = generate_translator_corpus(two_occupations(), defaults::gender_lexicon(),
                                      BalanceMode::kBalanced, 1, 0);
  auto s = io::export_jsonl(c);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), static_cast<long>(c.size()));
  auto first = nlohmann::json::parse(s.substr(0, s.find('\n')));
  EXPECT_EQ(first.at("id"), 0);
  EXPECT_EQ(first.at("template_id"), "translator.two-sentence");
}

TEST(DefaultDataTest, BundledCopiesMatchDataDirectory) {
  const std::string dir = TRUSTRATE_SOURCE_DIR "/data/";
  EXPECT_EQ(io::read_file(dir + "gender_lexicon.tsv"), defaults::kGenderLexicon);
  EXPECT_EQ(io::read_file(dir + "race_lexicon.tsv"), defaults::kRaceLexicon);
  EXPECT_EQ(io::read_file(dir + "occupations.tsv"), defaults::kOccupations);
  EXPECT_EQ(io::read_file(dir + "emotions.tsv"), defaults::kEmotions);
  EXPECT_EQ(io::read_file(dir + "sas_templates.tsv"), defaults::kSasTemplates);
  EXPECT_EQ(io::read_file(dir + "probe_script.txt"), defaults::kProbeScript);
  EXPECT_EQ(io::read_file(dir + "abuse_lexicon.txt"), defaults::kAbuseLexicon);
  EXPECT_EQ(io::read_file(dir + "pii_patterns.txt"), defaults::kPiiPatterns);
}

}  // namespace
}  // namespace trustrate
