#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "trustrate/chatbot.hpp"
#include "trustrate/defaults.hpp"
#include "trustrate/rating.hpp"
#include "trustrate/report.hpp"

namespace trustrate {
namespace {

using report::RatingReport;

ServiceHandle translator(std::string_view id, double beta = 0.0) {
  ServiceHandle h;
  h.kind = ServiceKind::kTranslator;
  BuiltinBackend b;
  b.id = std::string(id);
  b.bias.beta = beta;
  b.bias.rng_seed = 3;
  const auto occ = defaults::occupations();
  for (const auto& o : occ.occupations) b.stereotypes[o] = *occ.stereotype_of(o);
  h.backend = std::move(b);
  return h;
}

TranslatorRating rate(const ServiceHandle& h) {
  const auto occ = defaults::occupations();
  const auto g = defaults::gender_lexicon();
  return rate_translator(h, generate_translator_corpus(occ, g, BalanceMode::kBalanced, 10, 1),
                         generate_translator_corpus(occ, g, BalanceMode::kStereotyped, 10, 2), occ, g);
}

RatingReport wrap(report::RatingPayload payload, std::string kind = "translator") {
  RatingReport r;
  r.campaign_id = "unit-campaign";
  r.timestamp = "2026-01-01T00:00:00Z";
  r.service = "builtin:translator.stereotype";
  r.service_kind = std::move(kind);
  r.config.alpha = 0.05;
  r.config.seed = 42;
  r.config.corpus_spec_hashes = {"00000000000000ff"};
  r.config.corpus_size = 400;
  r.config.thresholds = {{"max_exclusion", 0.25}};
  r.rating = std::move(payload);
  r.failure_rate = 0.0;
  r.exclusion_rate = 0.0;
  return r;
}

SASRating sas_rating() {
  ServiceHandle h;
  h.kind = ServiceKind::kSentiment;
  BuiltinBackend b;
  b.id = std::string(builtin::kSentiment);
  b.emotions = defaults::emotions();
  b.bias.delta = 0.3;
  b.bias.noise = 0.1;
  b.bias.rng_seed = 5;
  b.bias.bind(defaults::gender_lexicon());
  h.backend = std::move(b);
  auto corpus = generate_sas_corpus(defaults::sas_templates(),
                                    {defaults::gender_lexicon(), defaults::race_lexicon()},
                                    defaults::emotions(), 1);
  return rate_sas(h, corpus, defaults::emotions());
}

ChatbotRating chatbot_rating() {
  ServiceHandle h;
  h.kind = ServiceKind::kChatbot;
  BuiltinBackend b;
  b.id = std::string(builtin::kChatStub);
  h.backend = std::move(b);
  ChatbotOptions o;
  o.probe_script = defaults::probe_script();
  o.abuse_lexicon = defaults::abuse_lexicon();
  o.pii_patterns = defaults::pii_patterns();
  VariantGrid g;
  g.models = {"base-M", "leaky-M"};
  g.data = {"base-D", "poisoned-B"};
  return rate_chatbot(h, g, UserProfile::uniform(o.issues), o);
}

std::vector<RatingReport> every_kind() {
  std::vector<RatingReport> out;
  out.push_back(wrap(rate(translator(builtin::kStereotype, 1.0))));
  out.push_back(wrap(rate(translator(builtin::kPassthrough))));
  out.push_back(wrap(compose_ratings(TranslatorLabel::kBS, TranslatorLabel::kBS), "composition"));
  PipelineRating p;
  p.first = rate(translator(builtin::kStereotype, 1.0));
  p.second = rate(translator(builtin::kNeutralize));
  p.empirical = rate(chain(translator(builtin::kStereotype, 1.0), translator(builtin::kNeutralize)));
  p.algebraic = compose_ratings(p.first.label, p.second.label);
  p.consistent = p.algebraic.admits(p.empirical.label);
  out.push_back(wrap(p));
  out.push_back(wrap(sas_rating(), "sentiment"));
  out.push_back(wrap(chatbot_rating(), "chatbot"));
  return out;
}

TEST(ReportTest, RoundTripEveryKind) {
  for (const auto& r : every_kind()) {
    const auto text = report::emit_report(r);
    const auto back = report::parse_report(text);
    EXPECT_EQ(back, r) << report::rating_kind(r.rating);
    EXPECT_EQ(report::emit_report(back), text);
  }
}

TEST(ReportTest, KindsAndTopLevelOrder) {
  const std::vector<std::string> kinds{"translator", "translator", "composition",
                                       "pipeline",   "sentiment",  "chatbot"};
  auto all = every_kind();
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(report::rating_kind(all[i].rating), kinds[i]);
  auto j = report::to_json(all[0]);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "campaign_id", "timestamp", "service",
                                            "config", "rating_kind", "rating", "failure_rate",
                                            "exclusion_rate"}));
}

TEST(ReportTest, BiasedSystemHasNoSecondStage) {
  auto j = report::to_json(wrap(rate(translator(builtin::kStereotype, 1.0))));
  EXPECT_EQ(j["rating"]["label"], "BS");
  EXPECT_FALSE(j["rating"].contains("t2"));
  auto d = report::to_json(wrap(rate(translator(builtin::kPassthrough))));
  EXPECT_TRUE(d["rating"].contains("t2"));
}

TEST(ReportTest, CanonicalText) {
  const auto text = report::emit_report(wrap(rate(translator(builtin::kPassthrough))));
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NE(text.find("\"failure_rate\": 0.0"), std::string::npos);
  EXPECT_NE(text.find("\n  \"campaign_id\": \"unit-campaign\""), std::string::npos);
  EXPECT_NE(text.find("\"corpus_spec_hashes\": [\"00000000000000ff\"]"), std::string::npos);
  EXPECT_EQ(report::format_double(0.1), "0.10000000000000001");
  for (double v : {1e-300, 2.5396e-10, 1.0 / 3.0}) EXPECT_EQ(std::stod(report::format_double(v)), v);
  EXPECT_EQ(report::format_double(3.0), "3.0");
  EXPECT_THROW(report::format_double(std::nan("")), Error);
}

TEST(ReportTest, NoBiasParametersLeak) {
  for (const auto& r : every_kind()) {
    const auto text = report::emit_report(r);
    for (const char* key : {"beta", "delta", "noise", "rng_seed", "garble"})
      EXPECT_EQ(text.find(key), std::string::npos) << key;
  }
}

TEST(ReportTest, RejectsUnknownSchema) {
  auto j = report::to_json(wrap(rate(translator(builtin::kPassthrough))));
  j["schema_version"] = "trustrate.report/99";
  EXPECT_THROW(report::from_json(j), Error);
}

TEST(LabelCardTest, FixedWidthAndHeadline) {
  for (const auto& r : every_kind()) {
    const auto card = report::render_label_card(r);
    std::istringstream in(card);
    std::string line;
    while (std::getline(in, line)) EXPECT_EQ(line.size(), report::kCardWidth) << line;
  }
  auto card = report::render_label_card(wrap(rate(translator(builtin::kStereotype, 1.0))));
  EXPECT_NE(card.find("| RATING: BS (Biased System)"), std::string::npos);
  EXPECT_NE(card.find("not run"), std::string::npos);
}

TEST(LabelCardTest, LongFieldsAreTruncated) {
  auto r = wrap(rate(translator(builtin::kPassthrough)));
  r.service = "http://" + std::string(200, 'x') + ".example/translate";
  const auto card = report::render_label_card(r);
  EXPECT_NE(card.find("x~ |"), std::string::npos);
}

TEST(LabelCardTest, NumbersAgreeWithReport) {
  const auto r = wrap(rate(translator(builtin::kPassthrough)));
  const auto& t = std::get<TranslatorRating>(r.rating);
  const auto card = report::render_label_card(r);
  std::regex num(R"(chi2=([-0-9.e+]+) df=(\d+) p=([-0-9.e+]+))");
  std::vector<const StageEvidence*> stages{&t.t1, &*t.t2};
  std::size_t i = 0;
  for (auto it = std::sregex_iterator(card.begin(), card.end(), num); it != std::sregex_iterator(); ++it, ++i) {
    ASSERT_LT(i, stages.size());
    const auto& test = stages[i]->test;
    EXPECT_NEAR(std::stod((*it)[1]), test.statistic, 1e-3 * std::max(1.0, test.statistic));
    EXPECT_EQ(std::stoi((*it)[2]), test.degrees_of_freedom);
    EXPECT_NEAR(std::stod((*it)[3]), test.p_value, 1e-2 * std::max(1e-300, test.p_value));
  }
  EXPECT_EQ(i, 2u);
}

}  // namespace
}  // namespace trustrate
