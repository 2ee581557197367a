#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace euslem;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("euslem-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (dir_ / name).string();
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"tag", "--level", "9"}).code, 1);
  EXPECT_EQ(run({"generate"}).code, 1);
  EXPECT_EQ(run({"compile"}).code, 1);
  EXPECT_EQ(run({"train", "--order", "4", "x"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MissingFileExitsTwo) {
  const auto r = run({"analyze", "--lexicon", "/nonexistent/x.lex"}, "gizonak");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/x.lex"), std::string::npos);
}

TEST_F(Scratch, ParseErrorsNameFileAndLine) {
  const auto bad = file("bad.rul", "ALPHABET a b ;\nSET V = a ;\nRULE \"x\" a:b <=> _ W ;\n");
  const auto r = run({"analyze", "--rules", bad}, "a");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(bad + ":3:"), std::string::npos) << r.err;
}

TEST(Cli, AnalyzePrintsEveryReading) {
  const auto r = run({"analyze"}, "gizonak semearena");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = corpus::read_cohorts_text(r.out);
  ASSERT_EQ(c.sentences.size(), 1u);
  EXPECT_EQ(c.sentences[0][0].readings.size(), 2u);
  EXPECT_EQ(c.sentences[0][1].readings.size(), 1u);
}

TEST(Cli, UnknownTokensFallBackUnlessStrict) {
  const auto lenient = run({"analyze"}, "qqq");
  EXPECT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.out.find("SRC=guesser"), std::string::npos);
  EXPECT_EQ(run({"analyze", "--strict"}, "qqq").code, 2);
  EXPECT_EQ(run({"analyze"}, "").code, 0);
}

TEST(Cli, TagOneReadingPerTokenAndStable) {
  const auto text = test::slurp(test::data_path("test_corpus.txt"));
  const auto a = run({"tag"}, text);
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run({"tag", "--jobs", "4"}, text);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run({"tag"}, text).out, a.out);
  const auto c = corpus::read_cohorts_text(a.out);
  std::size_t tokens = 0;
  for (const auto& s : corpus::tokenize(text)) tokens += s.size();
  EXPECT_EQ(c.token_count(), tokens);
  for (const auto& s : c.sentences)
    for (const auto& co : s) EXPECT_EQ(co.readings.size(), 1u) << co.surface;
}

TEST(Cli, TagLevels) {
  const auto one = run({"tag", "--level", "1"}, "Semearena etorri da.");
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_NE(one.out.find("\t\"seme\" NOUN_WITH_NOUN_ELLIPSIS\n"), std::string::npos) << one.out;
  const auto three = run({"tag", "--level", "3", "--l3-params", "case"}, "Semearena.");
  EXPECT_NE(three.out.find("NOUN_WITH_NOUN_ELLIPSIS+NOM\n"), std::string::npos) << three.out;
  const auto four = run({"tag", "--level", "4"}, "Semearena.");
  EXPECT_NE(four.out.find("ELL=NOUN{"), std::string::npos) << four.out;
  const auto cmp = run({"tag", "--level", "1"}, "Plaza gizon bat.");
  EXPECT_NE(cmp.out.find("NOUN(1)"), std::string::npos) << cmp.out;
  EXPECT_NE(cmp.out.find("NOUN(2)"), std::string::npos) << cmp.out;
}

TEST(Cli, GenerateCountsAndForms) {
  const auto d0 = run({"generate", "--lemma", "seme", "--count-only"});
  EXPECT_EQ(d0.out, "total=135 closed=77 genitive=58\n");
  const auto d1 = run({"generate", "--lemma", "seme", "--depth", "1", "--count-only"});
  EXPECT_EQ(d1.out, "total=7965 closed=77 genitive=58\n");
  const auto ine = run({"generate", "--lemma", "seme", "--features", "case=inessive,number=singular"});
  EXPECT_EQ(ine.out, "semean\n");
  const auto all = run({"generate", "--lemma", "seme"});
  EXPECT_EQ(static_cast<std::size_t>(std::count(all.out.begin(), all.out.end(), '\n')), 135u);
  EXPECT_EQ(run({"generate", "--lemma", "nope"}).code, 2);
}

TEST_F(Scratch, CompileThenAnalyzeFromNetwork) {
  const auto net = path("fixture.net");
  const auto c = run({"compile", "-o", net, "--max-ellipsis", "1"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("reentry_links="), std::string::npos);
  const auto from_net = run({"analyze", "--net", net}, "gizonak semearena etortze");
  const auto from_src = run({"analyze", "--max-ellipsis", "1"}, "gizonak semearena etortze");
  ASSERT_EQ(from_net.code, 0) << from_net.err;
  EXPECT_EQ(from_net.out, from_src.out);
  const auto junk = file("junk.net", "garbage");
  EXPECT_EQ(run({"analyze", "--net", junk}, "a").code, 2);
}

TEST_F(Scratch, TrainStatsEval) {
  const auto gold = test::data_path("gold.coh");
  const auto model = path("m.mod");
  ASSERT_EQ(run({"train", gold, "-o", model, "--order", "3", "--level", "1"}).code, 0);
  std::ifstream mf(model);
  std::string header;
  std::getline(mf, header);
  EXPECT_EQ(header.rfind("MODEL order=3 level=1", 0), 0u) << header;

  const auto stats = run({"stats", gold});
  ASSERT_EQ(stats.code, 0) << stats.err;
  EXPECT_NE(stats.out.find("ambiguity_rate           0.0000"), std::string::npos) << stats.out;
  EXPECT_NE(stats.out.find("readings_per_token       1.0000"), std::string::npos) << stats.out;
  EXPECT_EQ(run({"stats"}, "").code, 2);

  const auto self = run({"eval", gold, gold, "--level", "1"});
  ASSERT_EQ(self.code, 0) << self.err;
  EXPECT_NE(self.out.find("accuracy 1.0000"), std::string::npos) << self.out;

  const auto tagged = file("sys.coh", run({"tag", "--model", model}, test::slurp(test::data_path("train.txt"))).out);
  const auto rep = run({"eval", gold, tagged, "--level", "1"});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("tokens 75"), std::string::npos) << rep.out;

  const auto other = file("other.coh", "\"<x>\"\n\t\"x\" NOUN\n\n");
  const auto bad = run({"eval", gold, other});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("diverge"), std::string::npos) << bad.err;
}

TEST_F(Scratch, OutputFileOption) {
  const auto out = path("o.txt");
  const auto r = run({"analyze", "-o", out}, "etxean");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(test::slurp(out).find("\"etxe\""), std::string::npos);
}
