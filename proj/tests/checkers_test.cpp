#include <gtest/gtest.h>

#include "trustrate/checkers.hpp"
#include "trustrate/defaults.hpp"

namespace trustrate {
namespace {

class GenderDetectorTest : public ::testing::Test {
 protected:
  GenderDetector detector_{defaults::gender_lexicon()};
};

TEST_F(GenderDetectorTest, CountsForms) {
  auto n = detector_.counts("She said he gave her his book. They left.");
  EXPECT_EQ(n["female"], 2u);
  EXPECT_EQ(n["male"], 2u);
  EXPECT_EQ(n["neutral"], 1u);
}

TEST_F(GenderDetectorTest, CountsArePermutationInvariant) {
  auto a = detector_.counts("She is a Nurse. He is a Pilot. Katie is a Teller.");
  auto b = detector_.counts("Katie is a Teller. She is a Nurse. He is a Pilot.");
  EXPECT_EQ(a, b);
}

TEST_F(GenderDetectorTest, SentenceClass) {
  EXPECT_EQ(detector_.sentence_class("She is a Nurse"), "female");
  EXPECT_EQ(detector_.sentence_class("The Nurse is here"), "neutral");
  EXPECT_EQ(detector_.sentence_class("They are a Nurse"), "neutral");
  EXPECT_FALSE(detector_.sentence_class("She and he are Nurses"));
}

TEST_F(GenderDetectorTest, TranslationGenders) {
  auto g = translation_genders("She is a Nurse. He is a Pilot", detector_);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->first, "female");
  EXPECT_EQ(g->second, "male");
  EXPECT_FALSE(translation_genders("She is a Nurse and he is a Pilot", detector_));
  EXPECT_FALSE(translation_genders("She is a Nurse. He is a Pilot. Done.", detector_));
  EXPECT_FALSE(translation_genders("She is her Nurse. He is a Pilot", detector_));
  EXPECT_EQ(detector_.outcome_labels(), (std::vector<std::string>{"female", "male", "neutral"}));
}

TEST(SentimentClassTest, Boundaries) {
  EXPECT_EQ(classify_sentiment(-0.05), SentimentClass::kNegative);
  EXPECT_EQ(classify_sentiment(-0.0499), SentimentClass::kNeutral);
  EXPECT_EQ(classify_sentiment(0.05), SentimentClass::kNeutral);
  EXPECT_EQ(classify_sentiment(0.0501), SentimentClass::kPositive);
  EXPECT_EQ(classify_sentiment(-1.0), SentimentClass::kNegative);
  EXPECT_EQ(classify_sentiment(1.0), SentimentClass::kPositive);
  EXPECT_THROW(classify_sentiment(1.5), InvalidArgument);
  EXPECT_THROW(classify_sentiment(0.0, {0.2, 0.1}), InvalidArgument);
}

TEST(SentimentClassTest, MonotoneInScore) {
  int prev = 0;
  for (double s = -1.0; s <= 1.0; s += 0.01) {
    int c = static_cast<int>(classify_sentiment(s));
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(AbuseCheckerTest, FlagsWholeWordsOnly) {
  AbuseChecker c(defaults::abuse_lexicon());
  EXPECT_EQ(check_abusive("Only an idiot would ask.", c), kFlagged);
  EXPECT_EQ(check_abusive("Only an IDIOT would ask.", c), kFlagged);
  EXPECT_EQ(check_abusive("Idiotic questions are fine.", c), kClean);
  EXPECT_EQ(check_abusive("", c), kClean);
}

TEST(LeakageCheckerTest, Patterns) {
  LeakageChecker c(defaults::pii_patterns());
  EXPECT_EQ(check_leakage("Your record number is 123-45-6789.", c), kFlagged);
  EXPECT_EQ(check_leakage("Write to someone@example.org today", c), kFlagged);
  EXPECT_EQ(check_leakage("Card 4111 1111 1111 1111", c), kFlagged);
  EXPECT_EQ(check_leakage("Registration closes in 15 days.", c), kClean);
  EXPECT_THROW(LeakageChecker({"("}), InvalidArgument);
}

TEST(TranscriptTest, ParseAndFormatRoundTrip) {
  const std::string s = "user: Where do I vote?\nbot: At your polling place.\n";
  auto t = parse_transcript("# recorded\n\n" + s);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].speaker, Speaker::kUser);
  EXPECT_EQ(t[1].text, "At your polling place.");
  EXPECT_EQ(format_transcript(t), s);
  EXPECT_THROW(parse_transcript("narrator: hi\n"), InvalidArgument);
}

TEST(ComplexityTest, MeanTokensTimesDistinctRatio) {
  Transcript t{{Speaker::kUser, "ignored words here"},
               {Speaker::kBot, "a b c d"},
               {Speaker::kBot, "a b"}};
  // 6 tokens over 2 turns, 4 distinct of 6.
  EXPECT_DOUBLE_EQ(conversation_complexity(t), 3.0 * 4.0 / 6.0);
  EXPECT_THROW(conversation_complexity({{Speaker::kUser, "hi"}}), InvalidArgument);
}

TEST(FlipRateTest, CountsDifferingOutcomes) {
  auto obs = [](std::size_t id, const char* o) { return Observation{id, IssueKind::kBias, o, {}}; };
  std::vector<std::pair<Observation, Observation>> pairs{
      {obs(0, "positive"), obs(1, "positive")},
      {obs(2, "positive"), obs(3, "negative")},
      {obs(4, "neutral"), obs(5, "neutral")},
      {obs(6, "neutral"), obs(7, "negative")}};
  EXPECT_DOUBLE_EQ(paired_flip_rate(pairs), 0.5);
  EXPECT_THROW(paired_flip_rate({}), InvalidArgument);
  pairs[0].second.kind = IssueKind::kAbusiveLanguage;
  EXPECT_THROW(paired_flip_rate(pairs), InvalidArgument);
}

TEST(IssueKindTest, RoundTrip) {
  for (auto k : {IssueKind::kBias, IssueKind::kAbusiveLanguage, IssueKind::kInformationLeakage,
                 IssueKind::kConversationComplexity})
    EXPECT_EQ(parse_issue_kind(to_string(k)), k);
  EXPECT_THROW(parse_issue_kind("XX"), InvalidArgument);
}

}  // namespace
}  // namespace trustrate
