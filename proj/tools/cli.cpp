#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "euslem/analyzer.hpp"
#include "euslem/corpus.hpp"
#include "euslem/disambiguator.hpp"
#include "euslem/error.hpp"
#include "euslem/lexicon.hpp"
#include "euslem/network_io.hpp"
#include "euslem/tagset.hpp"
#include "euslem/twolevel.hpp"

#ifndef EUSLEM_DEFAULT_DATA_DIR
#define EUSLEM_DEFAULT_DATA_DIR "data"
#endif

namespace euslem::cli {

namespace {

/// Bad invocation detected after flag parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string lexicon, rules, tagset, cg, model, compounds, net;
  std::string out;
  std::vector<std::string> inputs;
  int level = 0;
  std::string l3_params;
  int max_ellipsis = 2;
  bool variants = false;
  bool guess = false;
  int order = 2;
  double lambda = 1.0;
  int jobs = 1;
  bool count_only = false;
  bool strict = false;
  std::string lemma;
  int depth = 0;
  std::string features;
};

std::string data_dir() {
  if (const char* env = std::getenv("EUSLEM_DATA"); env && *env) return env;
  return EUSLEM_DEFAULT_DATA_DIR;
}

std::string or_default(const std::string& given, const char* file) {
  if (!given.empty()) return given;
  return (std::filesystem::path(data_dir()) / file).string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError(path + ": cannot open");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Runs `parse` on a file, prefixing errors with the path and position.
template <class F>
auto load(const std::string& path, F parse) {
  try {
    return parse(path);
  } catch (const ParseError& e) {
    std::string where = path + ":" + std::to_string(e.line());
    if (e.column()) where += ":" + std::to_string(e.column());
    throw DataError(where + ": " + e.bare_message());
  } catch (const DataError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw DataError(path + ": " + msg);
  } catch (const Error& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Resources {
  tagset::TagsetConfig tagset;
  std::unique_ptr<lexicon::MorphNetwork> net;
  std::unique_ptr<Analyzer> analyzer;
};

tagset::TagsetConfig load_tagset_file(const Options& o) {
  return load(or_default(o.tagset, "euslem.tgs"), [](const std::string& p) { return tagset::load_tagset(read_file(p)); });
}

lexicon::MorphNetwork build_network(const Options& o, const tagset::TagsetConfig& tg, lexicon::Lexicon* keep = nullptr) {
  const auto rules_path = or_default(o.rules, "euslem.rul");
  const auto lex_path = or_default(o.lexicon, "euslem.lex");
  auto rules = load(rules_path, [](const std::string& p) {
    return std::make_shared<const twolevel::CompiledRules>(twolevel::parse_rules(read_file(p)));
  });
  auto lex = load(lex_path, [&](const std::string& p) { return lexicon::parse_lexicon(read_file(p), tg.categories); });
  auto net = load(lex_path, [&](const std::string&) {
    auto n = lexicon::compile_network(lex, rules, o.max_ellipsis);
    lexicon::attach_guesser(n, lex.generics, tg.open);
    return n;
  });
  if (keep) *keep = std::move(lex);
  return net;
}

Resources load_analyzer(const Options& o) {
  Resources r;
  r.tagset = load_tagset_file(o);
  if (!o.net.empty()) {
    r.net = std::make_unique<lexicon::MorphNetwork>(load(o.net, [](const std::string& p) {
      std::ifstream f(p, std::ios::binary);
      if (!f) throw DataError(p + ": cannot open");
      return lexicon::load_network(f);
    }));
  } else {
    r.net = std::make_unique<lexicon::MorphNetwork>(build_network(o, r.tagset));
  }
  r.analyzer = std::make_unique<Analyzer>(*r.net, r.tagset.derivations);
  return r;
}

AnalyzerConfig analyzer_config(const Options& o) {
  AnalyzerConfig c;
  c.max_ellipsis_depth = o.max_ellipsis;
  c.allow_variants = o.variants;
  c.allow_guesser = o.guess;
  return c;
}

std::string read_input(const Options& o, std::istream& in) {
  if (o.inputs.empty()) {
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  return read_file(o.inputs.front());
}

corpus::AnnotatedCorpus read_corpus(const std::string& path, std::istream& in) {
  if (path == "-") {
    try {
      return corpus::read_cohorts(in);
    } catch (const ParseError& e) {
      throw DataError("<stdin>:" + std::to_string(e.line()) + ": " + e.bare_message());
    }
  }
  return load(path, [](const std::string& p) {
    std::ifstream f(p);
    if (!f) throw DataError(p + ": cannot open");
    return corpus::read_cohorts(f);
  });
}

Sentence analyze_tokens(const std::vector<std::string>& tokens, const Analyzer& an, const AnalyzerConfig& cfg,
                        bool strict) {
  Sentence s;
  for (const auto& tok : tokens) {
    Cohort c{tok, {}};
    std::vector<Analysis> readings;
    try {
      readings = an.analyze(tok, cfg);
    } catch (const UnanalyzableError&) {
      if (strict) throw DataError("token '" + tok + "' is unanalyzable");
    }
    if (readings.empty()) {
      if (strict) throw DataError("token '" + tok + "' has no analysis");
      readings.push_back(fallback_analysis(tok));
    }
    for (auto& a : readings) c.readings.push_back({std::move(a), std::nullopt});
    s.push_back(std::move(c));
  }
  return s;
}

/// Applies `work` to every index with up to `jobs` threads; the first failing
/// index (in order) has its exception rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, jobs));
  if (count == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw DataError(o.out + ": cannot write");
  f << text;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_compile(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("compile needs -o OUT");
  const auto tg = load_tagset_file(o);
  lexicon::Lexicon lex;
  const auto net = build_network(o, tg, &lex);
  std::ostringstream bin;
  lexicon::save_network(net, bin);
  emit(o, out, bin.str());
  out << "entries=" << net.entries.size() << " exits=" << net.exit_count() << " reentry_links=" << net.reentry_link_count()
      << " nodes=" << net.nodes.size() << " generics=" << net.guesser.size() << '\n';
  return 0;
}

int cmd_analyze(const Options& o, std::istream& in, std::ostream& out) {
  const auto res = load_analyzer(o);
  const auto cfg = analyzer_config(o);
  const auto sentences = corpus::tokenize(read_input(o, in));
  std::vector<std::string> chunks(sentences.size());
  parallel_for(sentences.size(), o.jobs, [&](std::size_t i) {
    std::ostringstream s;
    corpus::write_sentence(analyze_tokens(sentences[i], *res.analyzer, cfg, o.strict), s, corpus::WriteMode::Full);
    chunks[i] = s.str();
  });
  std::string text;
  for (const auto& c : chunks) text += c;
  emit(o, out, text);
  return 0;
}

int cmd_tag(const Options& o, std::istream& in, std::ostream& out) {
  const auto res = load_analyzer(o);
  const auto& tg = res.tagset;
  const auto cg_path = or_default(o.cg, "euslem.cg");
  const auto grammar = load(cg_path, [](const std::string& p) { return disambiguator::parse_constraints(read_file(p)); });
  const auto model = load(or_default(o.model, "euslem.mod"), [](const std::string& p) {
    std::ifstream f(p);
    if (!f) throw DataError(p + ": cannot open");
    return disambiguator::load_model(f);
  });
  const auto compounds =
      load(or_default(o.compounds, "euslem.cmp"), [](const std::string& p) { return parse_compounds(read_file(p)); });
  const int level = o.level ? o.level : model.level;
  const auto params = o.l3_params.empty() ? model.params : split_list(o.l3_params);
  const auto cfg = analyzer_config(o);

  const auto sentences = corpus::tokenize(read_input(o, in));
  std::vector<std::string> chunks(sentences.size());
  parallel_for(sentences.size(), o.jobs, [&](std::size_t i) {
    auto s = analyze_tokens(sentences[i], *res.analyzer, cfg, o.strict);
    mark_compounds(s, compounds);
    for (auto& c : s) tagset::tag_cohort(c, model.level, model.params, tg);
    disambiguator::disambiguate(s, grammar, model, tg);
    for (auto& c : s) tagset::tag_cohort(c, level, params, tg);
    std::ostringstream text;
    corpus::write_sentence(s, text, corpus::WriteMode::Tagged);
    chunks[i] = text.str();
  });
  std::string text;
  for (const auto& c : chunks) text += c;
  emit(o, out, text);
  return 0;
}

int cmd_generate(const Options& o, std::ostream& out) {
  if (o.lemma.empty()) throw UsageError("generate needs --lemma");
  const auto res = load_analyzer(o);
  if (!res.analyzer->knows_lemma(o.lemma)) throw DataError("unknown lemma '" + o.lemma + "'");
  std::ostringstream text;
  if (!o.features.empty()) {
    const auto forms = res.analyzer->generate(o.lemma, parse_feature_list(o.features), o.depth);
    if (o.count_only) text << "total=" << forms.size() << '\n';
    else
      for (const auto& f : forms) text << f << '\n';
  } else {
    const auto rep = res.analyzer->enumerate_inflections(o.lemma, o.depth, o.count_only);
    if (o.count_only)
      text << "total=" << rep.total << " closed=" << rep.closed_count << " genitive=" << rep.genitive_bearing_count << '\n';
    else
      for (const auto& f : rep.forms) text << f << '\n';
  }
  emit(o, out, text.str());
  return 0;
}

int cmd_train(const Options& o, std::istream& in, std::ostream& out) {
  if (o.inputs.size() != 1) throw UsageError("train needs exactly one gold corpus");
  const auto tg = load_tagset_file(o);
  const auto gold = read_corpus(o.inputs.front(), in);
  const int level = o.level ? o.level : 2;
  const auto params = o.l3_params.empty() ? tg.level3_defaults : split_list(o.l3_params);
  const auto model = load(o.inputs.front(), [&](const std::string&) {
    return disambiguator::train_model(gold, o.order, level, params, o.lambda, tg);
  });
  std::ostringstream text;
  disambiguator::save_model(model, text);
  emit(o, out, text.str());
  return 0;
}

int cmd_stats(const Options& o, std::istream& in, std::ostream& out) {
  const auto path = o.inputs.empty() ? std::string("-") : o.inputs.front();
  const auto c = read_corpus(path, in);
  const auto st = load(path, [&](const std::string&) { return corpus::ambiguity_stats(c); });
  std::ostringstream t;
  auto row = [&](const char* k, const std::string& v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-24s %s\n", k, v.c_str());
    t << buf;
  };
  row("tokens", std::to_string(st.tokens));
  row("ambiguous_tokens", std::to_string(st.ambiguous_tokens));
  row("readings", std::to_string(st.total_readings));
  row("ambiguity_rate", fixed(st.ambiguity_rate));
  row("readings_per_token", fixed(st.readings_per_token));
  row("category_ambiguous", std::to_string(st.category_ambiguous_tokens));
  row("category_readings", std::to_string(st.category_readings));
  row("category_ambiguity_rate", fixed(st.category_ambiguity_rate));
  row("categories_per_token", fixed(st.categories_per_token));
  emit(o, out, t.str());
  return 0;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  if (o.inputs.size() != 2) throw UsageError("eval needs GOLD and SYSTEM corpora");
  const auto tg = load_tagset_file(o);
  const auto gold = read_corpus(o.inputs[0], in);
  const auto sys = read_corpus(o.inputs[1], in);
  const int level = o.level ? o.level : 2;
  const auto params = o.l3_params.empty() ? tg.level3_defaults : split_list(o.l3_params);
  const auto rep = load(o.inputs[1], [&](const std::string&) { return corpus::evaluate(gold, sys, level, params, tg); });
  std::ostringstream t;
  t << "tokens " << rep.tokens << "\ncorrect " << rep.correct << "\naccuracy " << fixed(rep.accuracy) << '\n';
  for (const auto& [tag, s] : rep.per_tag)
    t << tag << " tp=" << s.true_positive << " fp=" << s.false_positive << " fn=" << s.false_negative
      << " precision=" << fixed(s.precision()) << " recall=" << fixed(s.recall()) << '\n';
  emit(o, out, t.str());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Basque lemmatizer and tagger", "euslem"};
  app.require_subcommand(1);
  Options o;

  auto resources = [&](CLI::App* sub) {
    sub->add_option("--lexicon", o.lexicon, "Lexicon file");
    sub->add_option("--rules", o.rules, "Two-level rule file");
    sub->add_option("--tagset", o.tagset, "Tagset file");
    sub->add_option("--net", o.net, "Compiled network (instead of --lexicon/--rules)");
    sub->add_option("--max-ellipsis", o.max_ellipsis, "Ellipsis re-entry bound")->check(CLI::Range(0, 8));
    sub->add_flag("--variants", o.variants, "Allow nonstandard variants");
    sub->add_flag("--guess", o.guess, "Use the guesser for unknown words");
    sub->add_flag("--strict", o.strict, "Fail on tokens without analysis");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_option("-o", o.out, "Output file");
  };

  auto* compile = app.add_subcommand("compile", "Compile lexicon and rules to a network");
  resources(compile);
  auto* analyze = app.add_subcommand("analyze", "All readings per token");
  resources(analyze);
  analyze->add_option("input", o.inputs, "Text file (default: stdin)")->expected(0, 1);
  auto* tag = app.add_subcommand("tag", "Full tagging pipeline");
  resources(tag);
  tag->add_option("--cg", o.cg, "Constraint grammar");
  tag->add_option("--model", o.model, "Statistical model");
  tag->add_option("--compounds", o.compounds, "Multiword lemma list");
  tag->add_option("--level", o.level, "Output tag level")->check(CLI::Range(1, 4));
  tag->add_option("--l3-params", o.l3_params, "Level-3 feature keys, comma separated");
  tag->add_option("input", o.inputs, "Text file (default: stdin)")->expected(0, 1);
  auto* generate = app.add_subcommand("generate", "Paradigm enumeration or targeted generation");
  resources(generate);
  generate->add_option("--lemma", o.lemma, "Lemma")->required();
  generate->add_option("--depth", o.depth, "Ellipsis re-entries")->check(CLI::Range(0, 8));
  generate->add_option("--features", o.features, "k=v,k=v");
  generate->add_flag("--count-only", o.count_only, "Print counts only");
  auto* train = app.add_subcommand("train", "Train the n-gram model");
  train->add_option("--tagset", o.tagset, "Tagset file");
  train->add_option("--order", o.order, "2 or 3")->check(CLI::IsMember({2, 3}));
  train->add_option("--level", o.level, "Tag level")->check(CLI::Range(1, 4));
  train->add_option("--l3-params", o.l3_params, "Level-3 feature keys");
  train->add_option("--lambda", o.lambda, "Additive smoothing")->check(CLI::PositiveNumber);
  train->add_option("-o", o.out, "Model file");
  train->add_option("gold", o.inputs, "Gold cohort corpus")->required()->expected(1);
  auto* stats = app.add_subcommand("stats", "Ambiguity statistics");
  stats->add_option("corpus", o.inputs, "Cohort corpus (default: stdin)")->expected(0, 1);
  stats->add_option("-o", o.out, "Output file");
  auto* eval = app.add_subcommand("eval", "Compare a system corpus to gold");
  eval->add_option("--tagset", o.tagset, "Tagset file");
  eval->add_option("--level", o.level, "Tag level")->check(CLI::Range(1, 4));
  eval->add_option("--l3-params", o.l3_params, "Level-3 feature keys");
  eval->add_option("-o", o.out, "Output file");
  eval->add_option("files", o.inputs, "GOLD SYSTEM")->required()->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*compile) return cmd_compile(o, out);
    if (*analyze) return cmd_analyze(o, in, out);
    if (*tag) return cmd_tag(o, in, out);
    if (*generate) return cmd_generate(o, out);
    if (*train) return cmd_train(o, in, out);
    if (*stats) return cmd_stats(o, in, out);
    if (*eval) return cmd_eval(o, in, out);
  } catch (const UsageError& e) {
    err << "euslem: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "euslem: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace euslem::cli
