#pragma once

// Shared fixture loading and brute-force oracles for the test binaries.

#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "euslem/analyzer.hpp"
#include "euslem/corpus.hpp"
#include "euslem/disambiguator.hpp"
#include "euslem/lexicon.hpp"
#include "euslem/tagset.hpp"
#include "euslem/twolevel.hpp"

#ifndef EUSLEM_TEST_DATA_DIR
#error "EUSLEM_TEST_DATA_DIR must be defined"
#endif

namespace euslem::test {

inline std::string data_path(const std::string& name) { return std::string(EUSLEM_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Fixture {
  tagset::TagsetConfig tagset;
  std::shared_ptr<const twolevel::CompiledRules> rules;
  lexicon::Lexicon lex;
  lexicon::MorphNetwork net;
  std::unique_ptr<Analyzer> analyzer;
};

/// Shipped data compiled once with ellipsis depth 2 and the guesser attached.
inline const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.tagset = tagset::load_tagset(slurp(data_path("euslem.tgs")));
    x.rules = std::make_shared<const twolevel::CompiledRules>(twolevel::parse_rules(slurp(data_path("euslem.rul"))));
    x.lex = lexicon::parse_lexicon(slurp(data_path("euslem.lex")), x.tagset.categories);
    x.net = lexicon::compile_network(x.lex, x.rules, 2);
    lexicon::attach_guesser(x.net, x.lex.generics, x.tagset.open);
    x.analyzer = std::make_unique<Analyzer>(x.net, x.tagset.derivations);
    return x;
  }();
  return f;
}

// ---------------------------------------------------------------------------
// Two-level rules evaluated by scanning contexts directly on the pair string.

namespace oracle {

inline bool in_item(const twolevel::ContextItem& item, int pair) {
  for (int p : item.pairs)
    if (p == pair) return true;
  return false;
}

/// Whether w[pos, end) is in the language of items[k..].
inline bool spans(const std::vector<twolevel::ContextItem>& items, std::size_t k, std::span<const int> w, std::size_t pos,
                  std::size_t end) {
  if (k == items.size()) return pos == end;
  const auto& it = items[k];
  using twolevel::Repeat;
  switch (it.repeat) {
    case Repeat::ExactlyOne:
      return pos < end && in_item(it, w[pos]) && spans(items, k + 1, w, pos + 1, end);
    case Repeat::Optional:
      return spans(items, k + 1, w, pos, end) || (pos < end && in_item(it, w[pos]) && spans(items, k + 1, w, pos + 1, end));
    case Repeat::ZeroOrMore:
    case Repeat::OneOrMore: {
      if (it.repeat == Repeat::ZeroOrMore && spans(items, k + 1, w, pos, end)) return true;
      for (std::size_t q = pos; q < end && in_item(it, w[q]); ++q)
        if (spans(items, k + 1, w, q + 1, end)) return true;
      return false;
    }
  }
  return false;
}

/// Some suffix of w[0, i) matches the left context.
inline bool left_at(const twolevel::TwoLevelRule& r, std::span<const int> w, std::size_t i) {
  for (std::size_t j = 0; j <= i; ++j)
    if (spans(r.left.items, 0, w, j, i)) return true;
  return false;
}

/// Some prefix of w[i+1, n) matches the right context.
inline bool right_at(const twolevel::TwoLevelRule& r, std::span<const int> w, std::size_t i) {
  for (std::size_t k = i + 1; k <= w.size(); ++k)
    if (spans(r.right.items, 0, w, i + 1, k)) return true;
  return false;
}

inline bool rule_accepts(const twolevel::TwoLevelRule& r, std::span<const twolevel::PairSymbol> alphabet,
                         std::span<const int> w) {
  using twolevel::RuleOperator;
  const bool restrict = r.op == RuleOperator::ContextRequirement || r.op == RuleOperator::DoubleArrow;
  const bool coerce = r.op == RuleOperator::SurfaceCoercion || r.op == RuleOperator::DoubleArrow;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& p = alphabet[static_cast<std::size_t>(w[i])];
    const bool center = p == r.pair;
    const bool in_context = left_at(r, w, i) && right_at(r, w, i);
    if (center && restrict && !in_context) return false;
    if (center && r.op == RuleOperator::Exclusion && in_context) return false;
    if (!center && coerce && p.lexical == r.pair.lexical && in_context) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Exhaustive decoding: every path scored left to right, first maximum kept.

inline std::string history(const std::vector<std::string>& prev, int order) {
  const std::string s(disambiguator::kStartTag);
  if (order == 2) return prev.empty() ? s : prev.back();
  const auto a = prev.size() >= 2 ? prev[prev.size() - 2] : s;
  const auto b = prev.empty() ? s : prev.back();
  return a + "|" + b;
}

inline std::vector<std::size_t> decode(const std::vector<std::vector<std::string>>& tags,
                                       const std::vector<std::string>& forms,
                                       const std::vector<std::vector<std::string>>& lemmas,
                                       const disambiguator::StatModel& m) {
  const std::size_t n = tags.size();
  if (n == 0) return {};
  std::vector<std::size_t> idx(n, 0), best;
  double best_score = 0;
  while (true) {
    double s = 0.0;
    std::vector<std::string> prev;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t = tags[i][idx[i]];
      s = s + std::log(m.transition(history(prev, m.order), t));
      s = s + std::log(m.emission(forms[i], lemmas[i][idx[i]], t));
      prev.push_back(t);
    }
    s = s + std::log(m.transition(history(prev, m.order), disambiguator::kEndTag));
    if (best.empty() || s > best_score) {
      best = idx;
      best_score = s;
    }
    // odometer with position 0 most significant keeps enumeration lexicographic
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < tags[k].size()) break;
      idx[k] = 0;
      if (k == 0) return best;
    }
  }
}

// ---------------------------------------------------------------------------
// Reference tokenizer: pad every mark with spaces, then split.

inline std::vector<std::vector<std::string>> tokenize(const std::string& text) {
  static const std::vector<std::string> marks = {".", ",", ";", ":", "!", "?", "(", ")", "\"", "'",
                                                 "«", "»", "“", "”"};
  std::string padded;
  for (std::size_t i = 0; i < text.size();) {
    bool hit = false;
    for (const auto& m : marks)
      if (text.compare(i, m.size(), m) == 0) {
        padded += " " + m + " ";
        i += m.size();
        hit = true;
        break;
      }
    if (!hit) {
      const char c = text[i++];
      padded += (c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') ? ' ' : c;
    }
  }
  std::vector<std::vector<std::string>> out(1);
  std::istringstream in(padded);
  for (std::string tok; in >> tok;) {
    out.back().push_back(tok);
    if (tok == "." || tok == "?" || tok == "!") out.emplace_back();
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Generators.

/// Reading with the given category and extra features; lemma is `lemma`.
inline Reading make_reading(const std::string& lemma, const std::string& cat, FeatureSet extra = {}) {
  Reading r;
  r.analysis.lemma = lemma;
  r.analysis.features = std::move(extra);
  r.analysis.features[std::string(kCategoryKey)] = cat;
  r.analysis.segments.push_back({lemma, 0, lemma.size(), "", {}, SegmentRole::Stem});
  return r;
}

/// Hand-checkable random model over a small tag inventory.
inline disambiguator::StatModel random_model(std::mt19937& rng, const std::vector<std::string>& tags, int order,
                                             const std::vector<std::string>& words) {
  disambiguator::StatModel m;
  m.order = order;
  m.level = 1;
  m.lambda = std::uniform_int_distribution<int>(1, 3)(rng) / 2.0;
  m.inventory = tags;
  m.inventory.emplace_back(disambiguator::kEndTag);
  std::uniform_int_distribution<int> count(0, 4);
  std::vector<std::string> hist = {std::string(disambiguator::kStartTag)};
  for (const auto& t : tags) hist.push_back(t);
  std::vector<std::string> keys;
  if (order == 2) {
    keys = hist;
  } else {
    for (const auto& a : hist)
      for (const auto& b : hist) keys.push_back(a + "|" + b);
  }
  for (const auto& h : keys)
    for (const auto& t : m.inventory)
      if (auto c = count(rng)) m.transitions[h][t] = static_cast<std::size_t>(c);
  for (const auto& w : words)
    for (const auto& t : tags) {
      if (auto c = count(rng)) m.emit_form[w][t] = static_cast<std::size_t>(c);
      if (auto c = count(rng)) m.emit_lemma[w + "_l"][t] = static_cast<std::size_t>(c);
    }
  m.finalize();
  return m;
}

inline const std::vector<std::string> kCats = {"N", "V", "A", "D"};

/// Cohorts of 1..4 readings over a four-category inventory.
inline Sentence random_cg_sentence(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> len(1, 6), width(1, 4), cat(0, kCats.size() - 1);
  Sentence s;
  for (std::size_t i = len(rng); i > 0; --i) {
    Cohort c{"t", {}};
    for (std::size_t k = width(rng); k > 0; --k) c.readings.push_back(make_reading("l" + std::to_string(k), kCats[cat(rng)]));
    s.push_back(std::move(c));
  }
  return s;
}

/// One to five REMOVE/SELECT rules with random offsets and modifiers.
inline std::string random_grammar(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> rules(1, 5), cat(0, kCats.size() - 1), conds(0, 2), coin(0, 1);
  std::uniform_int_distribution<int> offset(-2, 2);
  std::string g;
  for (std::size_t r = rules(rng); r > 0; --r) {
    g += coin(rng) ? "REMOVE" : "SELECT";
    g += " (" + kCats[cat(rng)] + ")";
    const auto nc = conds(rng);
    if (nc) g += " IF";
    for (std::size_t c = 0; c < nc; ++c) {
      g += " (" + std::to_string(offset(rng)) + (coin(rng) ? "C" : "") + (coin(rng) ? "*" : "") + " (" +
           kCats[cat(rng)] + "))";
    }
    g += " ;\n";
  }
  return g;
}

}  // namespace euslem::test
