#include <gtest/gtest.h>

#include <random>

#include "euslem/error.hpp"
#include "support.hpp"

using namespace euslem;
using namespace euslem::tagset;

namespace {

const TagsetConfig& cfg() { return test::fixture().tagset; }

Analysis only(std::string_view word) {
  const auto as = test::fixture().analyzer->analyze(word);
  EXPECT_EQ(as.size(), 1u) << word;
  return as.at(0);
}

}  // namespace

TEST(TagsetFile, ShippedInventory) {
  EXPECT_EQ(cfg().categories.size(), kDefaultCategoryCount);
  EXPECT_TRUE(conformance_issues(cfg()).empty());
  EXPECT_EQ(cfg().open, (std::vector<std::string>{"NOUN", "VERB", "ADJECTIVE"}));
  EXPECT_EQ(cfg().subcategories.at("VERB"), (std::vector<std::string>{"SIMPLE", "COMPOUND"}));
  EXPECT_EQ(cfg().level3_defaults, (std::vector<std::string>{"case", "number"}));
  EXPECT_EQ(apply_derivation_tag("VERB", "tze", cfg()), "VERBAL_NOUN");
  EXPECT_FALSE(apply_derivation_tag("NOUN", "tze", cfg()));
}

TEST(TagsetFile, Errors) {
  EXPECT_THROW(load_tagset("CATEGORY A ;\nCATEGORY A ;\n"), ParseError);
  try {
    load_tagset("CATEGORY A ;\nOPEN B ;\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_tagset("CATEGORY A ;\nCATEGORY B ;\nDERIV A + x -> B ;\n"), ParseError);
  EXPECT_THROW(load_tagset("CATEGORY A ;\nDERIV A x -> B ;\n"), ParseError);
  EXPECT_THROW(load_tagset("COLOUR A ;\n"), ParseError);
}

TEST(TagsetFile, ConformanceCountsCategories) {
  const auto small = load_tagset("CATEGORY NOUN ;\n");
  ASSERT_EQ(conformance_issues(small).size(), 1u);
  EXPECT_NE(conformance_issues(small)[0].find("1 categories"), std::string::npos);
}

TEST(TagsetFile, CustomEllipsisPattern) {
  const auto t = load_tagset("CATEGORY NOUN ;\nELLIPSIS_TAG \"{BASE}/{ECAT}\" ;\n");
  const std::vector<EllipsisSlot> one(1), two(2);
  EXPECT_EQ(compose_ellipsis_tag("NOUN", one, t), "NOUN/NOUN");
  EXPECT_EQ(compose_ellipsis_tag("NOUN", two, t), "NOUN/NOUN_2");
  EXPECT_EQ(compose_ellipsis_tag("NOUN", {}, t), "NOUN");
}

TEST(Projection, WorkedExampleLabels) {
  EXPECT_EQ(project_tag(only("semearena"), 1, {}, cfg()).label, "NOUN_WITH_NOUN_ELLIPSIS");
  EXPECT_EQ(project_tag(only("etortze"), 1, {}, cfg()).label, "VERBAL_NOUN");
  EXPECT_EQ(project_tag(only("etxean"), 1, {}, cfg()).label, "NOUN");
}

TEST(Projection, DeepEllipsisIndexed) {
  AnalyzerConfig c;
  c.max_ellipsis_depth = 2;
  const auto as = test::fixture().analyzer->analyze("semearenarena", c);
  ASSERT_EQ(as.size(), 1u);
  EXPECT_EQ(project_tag(as[0], 1, {}, cfg()).label, "NOUN_WITH_NOUN_ELLIPSIS_2");
}

TEST(Projection, LevelsRefineEachOther) {
  const auto verb = test::make_reading("ikus", "VERB", {{"SUB", "SIMPLE"}}).analysis;
  EXPECT_EQ(project_tag(verb, 1, {}, cfg()).label, "VERB");
  EXPECT_EQ(project_tag(verb, 2, {}, cfg()).label, "VERB:SIMPLE");
  const auto noun = only("etxean");
  EXPECT_EQ(project_tag(noun, 3, {}, cfg()).label, "NOUN+INE+SG");
  const std::vector<std::string> p = {"det"};
  const auto t = project_tag(noun, 3, p, cfg());
  EXPECT_EQ(t.label, "NOUN+yes");
  EXPECT_EQ(t.params, p);
  EXPECT_EQ(project_tag(noun, 4, {}, cfg()).label, render_analysis(noun));
}

TEST(Projection, LevelThreeUsesOuterEllipsisFeatures) {
  EXPECT_EQ(project_tag(only("semearena"), 3, {}, cfg()).label, "NOUN_WITH_NOUN_ELLIPSIS+NOM+SG");
}

TEST(Projection, MissingFeatureMarked) {
  EXPECT_EQ(project_tag(test::make_reading("oso", "ADVERB").analysis, 3, {}, cfg()).label,
            "ADVERB+case=\xE2\x88\x85+number=\xE2\x88\x85");
}

TEST(Projection, CompoundIndexAtEveryLevelBelowFour) {
  auto a = only("etxean");
  a.compound = CompoundIndex{2, 3};
  EXPECT_EQ(project_tag(a, 1, {}, cfg()).label, "NOUN(2)");
  EXPECT_EQ(project_tag(a, 3, {}, cfg()).label, "NOUN+INE+SG(2)");
  EXPECT_NE(project_tag(a, 4, {}, cfg()).label.find("CMP=2/3"), std::string::npos);
}

TEST(Projection, Errors) {
  const auto a = only("etxean");
  EXPECT_THROW(project_tag(a, 0, {}, cfg()), Error);
  EXPECT_THROW(project_tag(a, 5, {}, cfg()), Error);
  EXPECT_THROW(project_tag(test::make_reading("x", "MYSTERY").analysis, 1, {}, cfg()), DataError);
  Cohort empty{"x", {}};
  EXPECT_THROW(tag_cohort(empty, 1, {}, cfg()), Error);
}

// Lower levels are functions of higher ones: readings equal at level k+1 are equal at level k.
TEST(Projection, CoarseningProperty) {
  std::vector<Analysis> pool;
  for (const char* w : {"gizonak", "semearena", "ederrekoetik", "etxean", "aitako", "mendietatik", "etortze", "bat"})
    for (auto& a : test::fixture().analyzer->analyze(w)) pool.push_back(a);
  for (const auto& x : pool)
    for (const auto& y : pool)
      for (int k = 1; k < 4; ++k)
        if (project_tag(x, k + 1, {}, cfg()).label == project_tag(y, k + 1, {}, cfg()).label)
          EXPECT_EQ(project_tag(x, k, {}, cfg()).label, project_tag(y, k, {}, cfg()).label);
}

TEST(Projection, LevelFourIsInjective) {
  std::vector<Analysis> pool;
  for (const auto& inf : test::fixture().analyzer->inflections("aita", 1)) pool.push_back(inf.analysis);
  std::map<std::string, const Analysis*> seen;
  for (const auto& a : pool) {
    const auto label = project_tag(a, 4, {}, cfg()).label;
    auto [it, fresh] = seen.emplace(label, &a);
    if (!fresh) EXPECT_EQ(*it->second, a);
    EXPECT_EQ(parse_analysis(label), a);
  }
}
