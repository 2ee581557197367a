#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "euslem/error.hpp"
#include "support.hpp"

using namespace euslem;
using namespace euslem::corpus;

namespace {

Sentence analyze_words(const std::vector<std::string>& words) {
  Sentence s;
  for (const auto& w : words) {
    Cohort c{w, {}};
    for (auto& a : test::fixture().analyzer->analyze(w)) c.readings.push_back({std::move(a), std::nullopt});
    if (c.readings.empty()) c.readings.push_back({fallback_analysis(w), std::nullopt});
    s.push_back(std::move(c));
  }
  return s;
}

AnnotatedCorpus analyzed(const std::string& text) {
  AnnotatedCorpus c;
  for (const auto& words : tokenize(text)) c.sentences.push_back(analyze_words(words));
  return c;
}

/// Corpus whose cohort i has readings[i] readings.
AnnotatedCorpus synthetic(const std::vector<std::size_t>& readings) {
  AnnotatedCorpus c;
  c.sentences.emplace_back();
  for (std::size_t i = 0; i < readings.size(); ++i) {
    Cohort co{"w" + std::to_string(i), {}};
    for (std::size_t k = 0; k < readings[i]; ++k)
      co.readings.push_back(test::make_reading("w" + std::to_string(k), k % 2 ? "VERB" : "NOUN"));
    c.sentences.back().push_back(std::move(co));
  }
  return c;
}

std::string write(const AnnotatedCorpus& c, WriteMode mode = WriteMode::Full) {
  std::ostringstream out;
  write_cohorts(c, out, mode);
  return out.str();
}

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Gizonak etxean daude."), (std::vector<std::vector<std::string>>{{"Gizonak", "etxean", "daude", "."}}));
  EXPECT_EQ(tokenize("Bai? Ez!  "), (std::vector<std::vector<std::string>>{{"Bai", "?"}, {"Ez", "!"}}));
  EXPECT_EQ(tokenize("a, b"), (std::vector<std::vector<std::string>>{{"a", ",", "b"}}));
  EXPECT_EQ(tokenize("«etxea»"), (std::vector<std::vector<std::string>>{{"«", "etxea", "»"}}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \n\t ").empty());
}

TEST(Tokenize, MatchesReferenceOnRandomText) {
  const std::vector<std::string> pool = {"a", "b", "z", "ñ", " ", " ", "\t", "\n", ".", ",", "?", "!", ";",
                                         "(", ")", "\"", "'", "«", "»", "“", "”", "-", "1", "é"};
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(0, 40);
  for (int n = 0; n < 2000; ++n) {
    std::string text;
    for (std::size_t k = len(rng); k > 0; --k) text += pool[pick(rng)];
    ASSERT_EQ(tokenize(text), test::oracle::tokenize(text)) << text;
  }
}

TEST(CohortIo, FullRoundTrip) {
  const auto c = analyzed(test::slurp(test::data_path("test_corpus.txt")));
  ASSERT_EQ(c.sentences.size(), 15u);
  const auto text = write(c);
  const auto back = read_cohorts_text(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(write(back), text);
}

TEST(CohortIo, TagsSurviveRoundTrip) {
  auto c = analyzed("Semearena handia da. Etortze hori.");
  const std::vector<std::string> params = {"det"};
  int level = 1;
  for (auto& s : c.sentences)
    for (auto& co : s) tagset::tag_cohort(co, (level++ % 3) + 1, params, test::fixture().tagset);
  EXPECT_EQ(read_cohorts_text(write(c)), c);
}

TEST(CohortIo, TaggedModeReadsBackLabels) {
  auto c = analyzed("Semearena etortze.");
  for (auto& s : c.sentences)
    for (auto& co : s) tagset::tag_cohort(co, 3, {}, test::fixture().tagset);
  const auto text = write(c, WriteMode::Tagged);
  EXPECT_NE(text.find("\t\"seme\" NOUN_WITH_NOUN_ELLIPSIS+NOM+SG\n"), std::string::npos) << text;
  const auto back = read_cohorts_text(text);
  ASSERT_EQ(back.token_count(), c.token_count());
  for (std::size_t j = 0; j < c.sentences[0].size(); ++j) {
    const auto& r = back.sentences[0][j].readings.at(0);
    EXPECT_EQ(r.tag->label, c.sentences[0][j].readings[0].tag->label);
    EXPECT_EQ(r.analysis.lemma, c.sentences[0][j].readings[0].analysis.lemma);
    // a label-only reading keeps its label through a second write
  }
  EXPECT_EQ(write(back, WriteMode::Tagged), text);
  EXPECT_EQ(write(back, WriteMode::Full), text);
}

TEST(CohortIo, LabelWithSpaceIsEscaped) {
  AnnotatedCorpus c;
  Reading r;
  r.analysis.lemma = "a b";
  r.tag = Tag{1, "X Y%", {}};
  c.sentences.push_back({Cohort{"a", {r}}});
  const auto text = write(c, WriteMode::Tagged);
  EXPECT_NE(text.find("X%20Y%25"), std::string::npos) << text;
  const auto back = read_cohorts_text(text);
  EXPECT_EQ(back.sentences[0][0].readings[0].tag->label, "X Y%");
  EXPECT_EQ(back.sentences[0][0].readings[0].analysis.lemma, "a b");
}

TEST(CohortIo, RandomAnalysesRoundTrip) {
  std::mt19937 rng(5);
  std::vector<Analysis> pool;
  for (const auto& lemma : {"seme", "eder", "etor", "aita"})
    for (auto& inf : test::fixture().analyzer->inflections(lemma, 1)) pool.push_back(std::move(inf.analysis));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), width(1, 4), len(1, 8);
  for (int n = 0; n < 200; ++n) {
    AnnotatedCorpus c;
    for (int s = 0; s < 3; ++s) {
      Sentence sent;
      for (std::size_t k = len(rng); k > 0; --k) {
        Cohort co{"tok" + std::to_string(k), {}};
        for (std::size_t w = width(rng); w > 0; --w) co.readings.push_back({pool[pick(rng)], std::nullopt});
        sent.push_back(std::move(co));
      }
      c.sentences.push_back(std::move(sent));
    }
    ASSERT_EQ(read_cohorts_text(write(c)), c);
  }
}

TEST(CohortIo, ErrorsCarryLineNumbers) {
  try {
    read_cohorts_text("\t\"x\" NOUN\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    read_cohorts_text("\"<x>\"\n\t\"x\" NOUN\nrubbish\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    read_cohorts_text("\"<x>\"\n\tnolemma\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_TRUE(read_cohorts_text("").sentences.empty());
}

TEST(CohortIo, BlankLinesSplitSentences) {
  const auto c = read_cohorts_text("\"<a>\"\n\t\"a\" X\n\n\n\"<b>\"\n\t\"b\" Y\r\n");
  ASSERT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.sentences[1][0].readings[0].tag->label, "Y");
}

// ---------------------------------------------------------------------------

TEST(Stats, SyntheticCorpusFigures) {
  std::vector<std::size_t> widths;
  widths.insert(widths.end(), 1458, 1);
  widths.insert(widths.end(), 507, 2);
  widths.insert(widths.end(), 148, 3);
  const auto st = ambiguity_stats(synthetic(widths));
  EXPECT_EQ(st.tokens, 2113u);
  EXPECT_EQ(st.ambiguous_tokens, 655u);
  EXPECT_EQ(st.total_readings, 1458u + 2 * 507 + 3 * 148);
  EXPECT_NEAR(st.ambiguity_rate, 0.31, 0.005);
  EXPECT_NEAR(st.readings_per_token, 1.38, 0.005);
  EXPECT_DOUBLE_EQ(st.ambiguity_rate, 655.0 / 2113.0);
  EXPECT_DOUBLE_EQ(st.readings_per_token, 2916.0 / 2113.0);
}

TEST(Stats, MatchDirectCountsOnRandomCorpora) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> width(1, 5), len(1, 60);
  for (int n = 0; n < 200; ++n) {
    std::vector<std::size_t> w(len(rng));
    for (auto& x : w) x = width(rng);
    const auto c = synthetic(w);
    const auto st = ambiguity_stats(c);
    std::size_t amb = 0, sum = 0, cat_amb = 0, cat_sum = 0;
    for (auto x : w) {
      amb += x > 1;
      sum += x;
      cat_amb += x > 1;  // readings alternate NOUN, VERB
      cat_sum += std::min<std::size_t>(x, 2);
    }
    ASSERT_EQ(st.ambiguous_tokens, amb);
    ASSERT_EQ(st.total_readings, sum);
    ASSERT_EQ(st.category_ambiguous_tokens, cat_amb);
    ASSERT_EQ(st.category_readings, cat_sum);
    ASSERT_DOUBLE_EQ(st.readings_per_token, static_cast<double>(sum) / static_cast<double>(w.size()));
    // duplicating the corpus leaves the rates unchanged
    auto twice = c;
    twice.sentences.push_back(c.sentences[0]);
    const auto st2 = ambiguity_stats(twice);
    ASSERT_EQ(st2.tokens, 2 * st.tokens);
    ASSERT_DOUBLE_EQ(st2.ambiguity_rate, st.ambiguity_rate);
    ASSERT_DOUBLE_EQ(st2.readings_per_token, st.readings_per_token);
  }
}

TEST(Stats, CategoryAmbiguityIgnoresSameCategoryReadings) {
  const auto c = analyzed("gizonak");
  const auto st = ambiguity_stats(c);
  EXPECT_EQ(st.ambiguous_tokens, 1u);
  EXPECT_EQ(st.category_ambiguous_tokens, 0u);
  EXPECT_DOUBLE_EQ(st.categories_per_token, 1.0);
}

TEST(Stats, EmptyCorpusRejected) { EXPECT_THROW(ambiguity_stats(AnnotatedCorpus{}), Error); }

// ---------------------------------------------------------------------------

TEST(Eval, IdentityAndSingleError) {
  const auto gold = read_cohorts_text(test::slurp(test::data_path("gold.coh")));
  const auto& cfg = test::fixture().tagset;
  const auto self = evaluate(gold, gold, 1, {}, cfg);
  EXPECT_EQ(self.tokens, gold.token_count());
  EXPECT_DOUBLE_EQ(self.accuracy, 1.0);
  for (const auto& [tag, score] : self.per_tag) {
    EXPECT_DOUBLE_EQ(score.precision(), 1.0) << tag;
    EXPECT_DOUBLE_EQ(score.recall(), 1.0) << tag;
  }
  auto sys = gold;
  sys.sentences[0][0].readings[0] = test::make_reading("gizon", "VERB");
  const auto rep = evaluate(gold, sys, 1, {}, cfg);
  EXPECT_EQ(rep.correct, rep.tokens - 1);
  EXPECT_EQ(rep.per_tag.at("VERB").false_positive, 1u);
  EXPECT_EQ(rep.per_tag.at("NOUN").false_negative, 1u);
  const auto& noun = rep.per_tag.at("NOUN");
  EXPECT_DOUBLE_EQ(noun.recall(), static_cast<double>(noun.true_positive) / (noun.true_positive + 1));
  EXPECT_DOUBLE_EQ(rep.per_tag.at("VERB").precision(), 0.0);
}

TEST(Eval, FinerLevelsNeverScoreHigher) {
  const auto gold = read_cohorts_text(test::slurp(test::data_path("gold.coh")));
  auto sys = analyzed(test::slurp(test::data_path("train.txt")));
  for (auto& s : sys.sentences)
    for (auto& c : s)
      if (c.readings.size() > 1) c.readings.erase(c.readings.begin());
  double prev = 1.0;
  for (int level = 1; level <= 4; ++level) {
    const auto acc = evaluate(gold, sys, level, {}, test::fixture().tagset).accuracy;
    EXPECT_LE(acc, prev) << level;
    prev = acc;
  }
}

TEST(Eval, MisalignmentNamesPosition) {
  const auto a = analyzed("gizonak etxean. aita.");
  auto b = a;
  b.sentences[1][0].surface = "ama";
  try {
    evaluate(a, b, 1, {}, test::fixture().tagset);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 2, token 1"), std::string::npos) << e.what();
  }
  auto c = a;
  c.sentences.pop_back();
  EXPECT_THROW(evaluate(a, c, 1, {}, test::fixture().tagset), Error);
}
