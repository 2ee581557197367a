#include <benchmark/benchmark.h>

#include <fstream>
#include <memory>
#include <sstream>

#include "euslem/analyzer.hpp"
#include "euslem/corpus.hpp"
#include "euslem/disambiguator.hpp"
#include "euslem/lexicon.hpp"
#include "euslem/tagset.hpp"
#include "euslem/twolevel.hpp"

using namespace euslem;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(EUSLEM_BENCH_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Data {
  tagset::TagsetConfig tagset = tagset::load_tagset(slurp("euslem.tgs"));
  std::shared_ptr<const twolevel::CompiledRules> rules =
      std::make_shared<const twolevel::CompiledRules>(twolevel::parse_rules(slurp("euslem.rul")));
  lexicon::Lexicon lex = lexicon::parse_lexicon(slurp("euslem.lex"), tagset.categories);
  lexicon::MorphNetwork net = [this] {
    auto n = lexicon::compile_network(lex, rules, 2);
    lexicon::attach_guesser(n, lex.generics, tagset.open);
    return n;
  }();
  Analyzer analyzer{net, tagset.derivations};
};

const Data& data() {
  static const Data d;
  return d;
}

}  // namespace

static void BM_CompileRules(benchmark::State& state) {
  const auto text = slurp("euslem.rul");
  for (auto _ : state) benchmark::DoNotOptimize(twolevel::CompiledRules(twolevel::parse_rules(text)));
}
BENCHMARK(BM_CompileRules);

static void BM_CompileNetwork(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) benchmark::DoNotOptimize(lexicon::compile_network(d.lex, d.rules, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CompileNetwork)->Arg(0)->Arg(2);

static void BM_AnalyzeWord(benchmark::State& state) {
  const auto& d = data();
  const char* words[] = {"gizonak", "semearena", "ederrekoetik", "mendietatik", "etortze", "etxean"};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(d.analyzer.analyze(words[i++ % 6]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AnalyzeWord);

static void BM_GuessWord(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state) benchmark::DoNotOptimize(d.analyzer.guess("blargetan"));
}
BENCHMARK(BM_GuessWord);

static void BM_EnumerateParadigm(benchmark::State& state) {
  const auto& d = data();
  for (auto _ : state)
    benchmark::DoNotOptimize(d.analyzer.enumerate_inflections("seme", static_cast<int>(state.range(0)), true));
}
BENCHMARK(BM_EnumerateParadigm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_TagCorpus(benchmark::State& state) {
  const auto& d = data();
  const auto grammar = disambiguator::parse_constraints(slurp("euslem.cg"));
  std::istringstream min(slurp("euslem.mod"));
  const auto model = disambiguator::load_model(min);
  const auto sentences = corpus::tokenize(slurp("test_corpus.txt"));
  AnalyzerConfig cfg;
  cfg.allow_guesser = true;
  for (auto _ : state) {
    for (const auto& words : sentences) {
      Sentence s;
      for (const auto& w : words) {
        Cohort c{w, {}};
        for (auto& a : d.analyzer.analyze(w, cfg)) c.readings.push_back({std::move(a), std::nullopt});
        if (c.readings.empty()) c.readings.push_back({fallback_analysis(w), std::nullopt});
        s.push_back(std::move(c));
      }
      disambiguator::disambiguate(s, grammar, model, d.tagset);
      benchmark::DoNotOptimize(s);
    }
  }
}
BENCHMARK(BM_TagCorpus)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
