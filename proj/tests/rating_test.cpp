#include <gtest/gtest.h>

#include "trustrate/defaults.hpp"
#include "trustrate/rating.hpp"

namespace trustrate {
namespace {

using L = TranslatorLabel;

StageEvidence stage(bool significant) {
  StageEvidence ev;
  ev.test.significant = significant;
  ev.test.p_value = significant ? 0.001 : 0.5;
  return ev;
}

ServiceHandle translator(std::string_view id, double beta = 0.0, std::uint64_t seed = 1) {
  ServiceHandle h;
  h.kind = ServiceKind::kTranslator;
  BuiltinBackend b;
  b.id = std::string(id);
  b.bias.beta = beta;
  b.bias.rng_seed = seed;
  const auto occ = defaults::occupations();
  for (const auto& o : occ.occupations) b.stereotypes[o] = *occ.stereotype_of(o);
  h.backend = std::move(b);
  return h;
}

ServiceHandle sentiment(double delta, double noise = 0.0, std::uint64_t seed = 1) {
  ServiceHandle h;
  h.kind = ServiceKind::kSentiment;
  BuiltinBackend b;
  b.id = std::string(builtin::kSentiment);
  b.emotions = defaults::emotions();
  b.bias.delta = delta;
  b.bias.noise = noise;
  b.bias.rng_seed = seed;
  b.bias.bind(defaults::gender_lexicon());
  h.backend = std::move(b);
  return h;
}

class TranslatorRatingTest : public ::testing::Test {
 protected:
  TranslatorRating rate(const ServiceHandle& h, std::uint64_t seed = 1, std::size_t pairs = 10) {
    auto u = generate_translator_corpus(occ_, gender_, BalanceMode::kBalanced, pairs, seed);
    auto b = generate_translator_corpus(occ_, gender_, BalanceMode::kStereotyped, pairs, seed + 1000);
    return rate_translator(h, u, b, occ_, gender_);
  }
  OccupationList occ_ = defaults::occupations();
  FillerLexicon gender_ = defaults::gender_lexicon();
};

TEST(TwoStageTest, LabelMapping) {
  EXPECT_EQ(translator_label(true, true), L::kBS);
  EXPECT_EQ(translator_label(true, false), L::kBS);
  EXPECT_EQ(translator_label(false, true), L::kDSBS);
  EXPECT_EQ(translator_label(false, false), L::kUCS);
}

TEST(TwoStageTest, SecondStageSkippedWhenFirstFlags) {
  for (bool t1 : {false, true}) {
    for (bool t2 : {false, true}) {
      int t2_runs = 0;
      auto r = run_two_stage([&] { return stage(t1); },
                             [&] {
                               ++t2_runs;
                               return stage(t2);
                             });
      EXPECT_EQ(r.label, translator_label(t1, t2));
      EXPECT_EQ(t2_runs, t1 ? 0 : 1);
      EXPECT_EQ(r.t2.has_value(), !t1);
    }
  }
}

TEST(CompositionTest, AllNineCells) {
  const CompositionRating all{{L::kBS, L::kUCS, L::kDSBS}};
  EXPECT_EQ(compose_ratings(L::kBS, L::kBS), all);
  EXPECT_EQ(compose_ratings(L::kBS, L::kUCS), CompositionRating{{L::kUCS}});
  EXPECT_EQ(compose_ratings(L::kBS, L::kDSBS), CompositionRating{{L::kBS}});
  EXPECT_EQ(compose_ratings(L::kUCS, L::kBS), CompositionRating{{L::kBS}});
  EXPECT_EQ(compose_ratings(L::kUCS, L::kUCS), CompositionRating{{L::kUCS}});
  EXPECT_EQ(compose_ratings(L::kUCS, L::kDSBS), CompositionRating{{L::kDSBS}});
  EXPECT_EQ(compose_ratings(L::kDSBS, L::kBS), CompositionRating{{L::kBS}});
  EXPECT_EQ(compose_ratings(L::kDSBS, L::kUCS), CompositionRating{{L::kUCS}});
  EXPECT_EQ(compose_ratings(L::kDSBS, L::kDSBS), CompositionRating{{L::kDSBS}});
  EXPECT_EQ(compose_ratings(L::kBS, L::kBS).to_string(), "Indeterminate{BS,UCS,DSBS}");
  EXPECT_EQ(compose_ratings(L::kBS, L::kUCS).to_string(), "UCS");
}

TEST(CompositionTest, ChainsFoldLeftWithUnion) {
  EXPECT_EQ(compose_chain({L::kDSBS}), CompositionRating{{L::kDSBS}});
  EXPECT_EQ(compose_chain({L::kBS, L::kBS, L::kUCS}), CompositionRating{{L::kUCS}});
  EXPECT_EQ(compose_chain({L::kBS, L::kBS, L::kDSBS}), (CompositionRating{{L::kBS, L::kDSBS}}));
  EXPECT_EQ(compose_chain({L::kUCS, L::kDSBS, L::kDSBS}), CompositionRating{{L::kDSBS}});
  EXPECT_THROW(compose_chain({}), InvalidArgument);
}

TEST(LabelTest, NamesRoundTrip) {
  for (auto l : {L::kBS, L::kUCS, L::kDSBS}) EXPECT_EQ(parse_translator_label(to_string(l)), l);
  EXPECT_EQ(long_name(L::kBS), "Biased System");
  EXPECT_THROW(parse_translator_label("XYZ"), InvalidArgument);
}

TEST(DependenceTest, ConstantOutcomeIsNoDependence) {
  auto t = stats::ContingencyTable::zeros({"female", "male"}, {"female", "male", "neutral"});
  t.counts = {{0, 0, 50}, {0, 0, 50}};
  auto r = dependence_test(t, 0.05);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant);
  t.counts = {{10, 10, 0}, {0, 0, 0}};
  EXPECT_THROW(dependence_test(t, 0.05), Unratable);
}

TEST_F(TranslatorRatingTest, BuiltinOracleLabels) {
  EXPECT_EQ(rate(translator(builtin::kStereotype, 1.0)).label, L::kBS);
  EXPECT_EQ(rate(translator(builtin::kPassthrough)).label, L::kDSBS);
  EXPECT_EQ(rate(translator(builtin::kNeutralize)).label, L::kUCS);
}

TEST_F(TranslatorRatingTest, BsCarriesNoSecondStage) {
  auto r = rate(translator(builtin::kStereotype, 1.0));
  EXPECT_FALSE(r.t2);
  EXPECT_EQ(r.t1.table.total(), 400u);  // two sentences per case
  EXPECT_EQ(r.t1.cases, 200u);
}

TEST_F(TranslatorRatingTest, PassthroughEvidence) {
  auto r = rate(translator(builtin::kPassthrough));
  ASSERT_TRUE(r.t2);
  EXPECT_EQ(r.t1.test.statistic, 0.0);
  EXPECT_GT(r.t2->test.statistic, 100.0);
  EXPECT_EQ(r.exclusion_rate, 0.0);
}

TEST_F(TranslatorRatingTest, ExclusionAboveLimitIsUnratable) {
  auto h = translator(builtin::kGarble);
  std::get<BuiltinBackend>(h.backend).garble_fraction = 0.3;
  EXPECT_THROW(rate(h), Unratable);
  std::get<BuiltinBackend>(h.backend).garble_fraction = 0.1;
  auto r = rate(h);
  EXPECT_GT(r.t1.exclusion_rate, 0.0);
  EXPECT_LE(r.exclusion_rate, 0.25);
}

TEST_F(TranslatorRatingTest, SequentialPipeline) {
  auto p = rate_sequential_pipeline(translator(builtin::kStereotype, 1.0), translator(builtin::kNeutralize),
                                    generate_translator_corpus(occ_, gender_, BalanceMode::kBalanced, 10, 1),
                                    generate_translator_corpus(occ_, gender_, BalanceMode::kStereotyped, 10, 2),
                                    occ_, gender_);
  EXPECT_EQ(p.first.label, L::kBS);
  EXPECT_EQ(p.second.label, L::kUCS);
  EXPECT_EQ(p.algebraic, CompositionRating{{L::kUCS}});
  EXPECT_EQ(p.empirical.label, L::kUCS);
  EXPECT_TRUE(p.consistent);
}

TEST_F(TranslatorRatingTest, RejectsWrongKindAndMissingStereotypes) {
  auto u = generate_translator_corpus(occ_, gender_, BalanceMode::kBalanced, 1, 1);
  EXPECT_THROW(rate_translator(sentiment(0.0), u, u, occ_, gender_), InvalidArgument);
  OccupationList plain{occ_.occupations, std::nullopt};
  EXPECT_THROW(rate_translator(translator(builtin::kPassthrough), u, u, plain, gender_), InvalidArgument);
}

class SasRatingTest : public ::testing::Test {
 protected:
  Corpus corpus_ = generate_sas_corpus(defaults::sas_templates(),
                                       {defaults::gender_lexicon(), defaults::race_lexicon()},
                                       defaults::emotions(), 5);
  EmotionLexicon emotions_ = defaults::emotions();

  const AttributeEvidence& gender(const SASRating& r) {
    for (const auto& a : r.attributes)
      if (a.attribute == "gender") return a;
    throw std::runtime_error("no gender evidence");
  }
};

TEST_F(SasRatingTest, UnbiasedServiceGradesLow) {
  auto r = rate_sas(sentiment(0.0), corpus_, emotions_);
  EXPECT_EQ(r.grade, BiasGrade::kLow);
  for (const auto& a : r.attributes) {
    EXPECT_FALSE(a.biased);
    EXPECT_EQ(a.tv_distance, 0.0);
  }
  EXPECT_LT(r.confounding.gap, 1e-12);
  EXPECT_EQ(r.failures, 0u);
}

TEST_F(SasRatingTest, TvDistanceOracle) {
  // Female subjects shifted by +0.5: sad (-0.5) lands on neutral and
  // terrified (-0.4) turns positive, so female is 3/1/6 against male 5/0/5.
  auto r = rate_sas(sentiment(0.5), corpus_, emotions_);
  EXPECT_NEAR(gender(r).tv_distance, 0.2, 1e-12);
  EXPECT_TRUE(gender(r).biased);
  EXPECT_EQ(r.grade, BiasGrade::kMedium);
  auto full = rate_sas(sentiment(1.0), corpus_, emotions_);
  EXPECT_NEAR(gender(full).tv_distance, 0.5, 1e-12);
  EXPECT_EQ(full.grade, BiasGrade::kHigh);
}

TEST_F(SasRatingTest, TvNonDecreasingInDelta) {
  double prev = -1.0;
  for (double delta : {0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
    auto tv = gender(rate_sas(sentiment(delta), corpus_, emotions_)).tv_distance;
    EXPECT_GE(tv, prev) << "delta=" << delta;
    prev = tv;
  }
}

TEST_F(SasRatingTest, TablesExcludeNotRevealed) {
  auto r = rate_sas(sentiment(0.0), corpus_, emotions_);
  EXPECT_EQ(gender(r).table.row_labels, (std::vector<std::string>{"female", "male"}));
  std::size_t gendered = 0;
  for (const auto& c : corpus_.cases) gendered += c.assignment.at("gender") != kNotRevealed;
  EXPECT_EQ(gender(r).table.total(), gendered);
  EXPECT_LT(gendered, corpus_.size());
  const auto& cf = r.confounding;
  EXPECT_EQ(cf.treatments, (std::vector<std::string>{"negative", "positive"}));
  EXPECT_GE(cf.strata.size(), 4u);
  for (const auto& d : cf.adjusted) {
    double s = 0;
    for (double p : d) s += p;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST_F(SasRatingTest, ConfoundedServiceShowsGap) {
  // Drop female subjects with positive emotions entirely: stratum and
  // treatment become dependent.
  Corpus skewed = corpus_;
  skewed.cases.clear();
  for (const auto& c : corpus_.cases) {
    const bool positive = emotions_.find(c.slots.at("emotion"))->valence > 0;
    if (c.assignment.at("gender") == "female" && positive) continue;
    skewed.cases.push_back(c);
  }
  auto r = rate_sas(sentiment(0.5), skewed, emotions_);
  EXPECT_GT(r.confounding.gap, 0.0);
}

TEST_F(SasRatingTest, ParallelismDoesNotChangeTheRating) {
  SASOptions one, many;
  many.campaign.parallelism = 16;
  EXPECT_EQ(rate_sas(sentiment(0.3, 0.4, 9), corpus_, emotions_, one),
            rate_sas(sentiment(0.3, 0.4, 9), corpus_, emotions_, many));
}

TEST_F(SasRatingTest, GradeThresholds) {
  GradeThresholds t;
  EXPECT_EQ(grade_for(0.1, t), BiasGrade::kLow);
  EXPECT_EQ(grade_for(0.1000001, t), BiasGrade::kMedium);
  EXPECT_EQ(grade_for(0.3, t), BiasGrade::kMedium);
  EXPECT_EQ(grade_for(0.31, t), BiasGrade::kHigh);
  EXPECT_THROW((GradeThresholds{0.3, 0.1}.validate()), InvalidArgument);
}

TEST_F(SasRatingTest, CounterfactualFlipRates) {
  auto pairs = counterfactual_pairs(corpus_, "gender");
  SentimentClassing classing;
  auto flip_rate = [&](double delta, bool crossing_only) {
    auto run = run_campaign_invocations(sentiment(delta), corpus_);
    auto obs = sentiment_observations(run.invocations, classing);
    std::vector<std::pair<TestCase, TestCase>> chosen;
    for (const auto& p : pairs) {
      const bool negative = emotions_.find(p.first.slots.at("emotion"))->valence < 0;
      if (!crossing_only || negative) chosen.push_back(p);
    }
    return paired_flip_rate(observation_pairs(chosen, obs));
  };
  EXPECT_EQ(flip_rate(0.0, false), 0.0);
  EXPECT_GT(flip_rate(1.0, true), 0.9);
}

TEST_F(SasRatingTest, FailedInvocationsAreCountedNotRated) {
  auto run = run_campaign_invocations(sentiment(0.0), corpus_);
  run.invocations[0].error = "timeout";
  run.invocations[0].score.reset();
  auto r = rate_sas_invocations(corpus_, run.invocations, emotions_, {});
  EXPECT_EQ(r.failures, 1u);
  EXPECT_EQ(r.cases, corpus_.size());
}

}  // namespace
}  // namespace trustrate
