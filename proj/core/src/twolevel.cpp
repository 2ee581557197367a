#include "euslem/twolevel.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <map>
#include <tuple>

#include "euslem/error.hpp"
#include "scanner.hpp"

namespace euslem::twolevel {

using detail::Token;

std::string_view to_string(RuleOperator op) {
  switch (op) {
    case RuleOperator::ContextRequirement: return "=>";
    case RuleOperator::SurfaceCoercion: return "<=";
    case RuleOperator::DoubleArrow: return "<=>";
    case RuleOperator::Exclusion: return "/<=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// RuleSet

int RuleSet::pair_index(PairSymbol p) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == p) return static_cast<int>(i);
  return -1;
}

const std::vector<int>& RuleSet::pairs_with_lexical(SymbolId lexical) const {
  const auto idx = static_cast<std::size_t>(lexical);
  return idx < by_lexical_.size() ? by_lexical_[idx] : empty_;
}

bool RuleSet::is_surface_symbol(SymbolId s) const {
  const auto idx = static_cast<std::size_t>(s);
  return s != kNull && idx < surface_.size() && surface_[idx];
}

bool RuleSet::is_lexical_symbol(SymbolId s) const {
  const auto idx = static_cast<std::size_t>(s);
  return s != kNull && idx < lexical_.size() && lexical_[idx];
}

void RuleSet::reindex() {
  by_lexical_.assign(symbols.size(), {});
  surface_.assign(symbols.size(), false);
  lexical_.assign(symbols.size(), false);
  variant_pair.resize(alphabet.size(), false);
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const auto& p = alphabet[i];
    by_lexical_[static_cast<std::size_t>(p.lexical)].push_back(static_cast<int>(i));
    surface_[static_cast<std::size_t>(p.surface)] = true;
    lexical_[static_cast<std::size_t>(p.lexical)] = true;
  }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string strip_braces(std::string_view s) {
  if (s.size() >= 2 && s.front() == '{' && s.back() == '}') return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

bool is_pair_token(std::string_view t) {
  // a ':' that is neither the whole token nor inside braces
  int depth = 0;
  for (char c : t) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ':' && depth == 0) return t.size() > 1;
  }
  return false;
}

std::pair<std::string, std::string> split_pair(std::string_view t) {
  int depth = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '{') ++depth;
    if (t[i] == '}') --depth;
    if (t[i] == ':' && depth == 0) return {strip_braces(t.substr(0, i)), strip_braces(t.substr(i + 1))};
  }
  return {strip_braces(t), strip_braces(t)};
}

struct RawItem {
  Token token;
  std::string text;  // without repetition suffix / parentheses
  Repeat repeat = Repeat::ExactlyOne;
};

struct RawRule {
  Token name_token;
  TwoLevelRule rule;
  std::vector<RawItem> left, right;
  Token pair_token;
};

std::vector<RawItem> parse_context(const std::vector<Token>& toks, std::size_t begin, std::size_t end) {
  std::vector<RawItem> out;
  std::size_t i = begin;
  while (i < end) {
    const auto& t = toks[i];
    if (t.is("(")) {
      if (i + 2 >= end + 0 || !toks[i + 2].is(")") || toks[i + 1].is("(") || toks[i + 1].is(")"))
        detail::fail(t, "expected '(item)'");
      out.push_back({toks[i + 1], toks[i + 1].text, Repeat::Optional});
      i += 3;
      continue;
    }
    if (t.is(")")) detail::fail(t, "unbalanced ')'");
    if (t.quoted) detail::fail(t, "unexpected string in context");
    RawItem item{t, t.text, Repeat::ExactlyOne};
    if (t.text.size() > 1 && (t.text.back() == '*' || t.text.back() == '+')) {
      item.repeat = t.text.back() == '*' ? Repeat::ZeroOrMore : Repeat::OneOrMore;
      item.text.pop_back();
    }
    out.push_back(std::move(item));
    ++i;
  }
  return out;
}

std::optional<RuleOperator> parse_operator(std::string_view s) {
  if (s == "=>") return RuleOperator::ContextRequirement;
  if (s == "<=") return RuleOperator::SurfaceCoercion;
  if (s == "<=>") return RuleOperator::DoubleArrow;
  if (s == "/<=") return RuleOperator::Exclusion;
  return std::nullopt;
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
  RuleSet rs;
  rs.source = std::string(text);
  const auto stmts = detail::statements(detail::scan(text));

  std::vector<PairSymbol> declared;          // ALPHABET pairs, in order
  std::vector<PairSymbol> standard_rule_pairs;
  std::vector<PairSymbol> variant_rule_pairs;
  std::vector<RawRule> raw_rules;
  std::set<std::string> names;

  auto make_pair = [&](const Token& t, bool identity_allowed) -> PairSymbol {
    if (!is_pair_token(t.text) && !identity_allowed) detail::fail(t, "expected a pair x:y");
    auto [l, s] = split_pair(t.text);
    if (l.empty() || s.empty()) detail::fail(t, "malformed pair '" + t.text + "'");
    PairSymbol p{rs.symbols.intern(l), rs.symbols.intern(s)};
    if (p.lexical == kNull && p.surface == kNull) detail::fail(t, "pair with both sides NULL");
    return p;
  };

  for (const auto& st : stmts) {
    if (st.empty()) continue;
    const auto& head = st.front();
    if (head.is("ALPHABET")) {
      for (std::size_t i = 1; i < st.size(); ++i) declared.push_back(make_pair(st[i], true));
    } else if (head.is("SET")) {
      if (st.size() < 3 || !st[2].is("=")) detail::fail(head, "expected 'SET <Name> = <symbol> ... ;'");
      const auto& name = st[1].text;
      if (rs.sets.count(name)) detail::fail(st[1], "duplicate set '" + name + "'");
      std::vector<SymbolId> members;
      for (std::size_t i = 3; i < st.size(); ++i) {
        if (st[i].quoted || st[i].is("(") || st[i].is(")")) detail::fail(st[i], "unexpected token in SET");
        members.push_back(rs.symbols.intern(strip_braces(st[i].text)));
      }
      if (members.empty()) detail::fail(st[1], "empty set '" + name + "'");
      rs.sets.emplace(name, std::move(members));
    } else if (head.is("RULE")) {
      if (st.size() < 4 || !st[1].quoted) detail::fail(head, "expected 'RULE \"<name>\" ...'");
      RawRule rr;
      rr.name_token = st[1];
      rr.rule.name = st[1].text;
      rr.rule.line = head.line;
      if (!names.insert(rr.rule.name).second) detail::fail(st[1], "duplicate rule name '" + rr.rule.name + "'");
      std::size_t i = 2;
      if (st[i].is("VARIANT")) {
        rr.rule.variant_only = true;
        ++i;
      }
      if (i + 1 >= st.size()) detail::fail(head, "incomplete rule");
      rr.pair_token = st[i];
      rr.rule.pair = make_pair(st[i], false);
      auto op = parse_operator(st[i + 1].text);
      if (!op) detail::fail(st[i + 1], "unknown operator '" + st[i + 1].text + "'");
      rr.rule.op = *op;
      if (rr.rule.pair.lexical == kNull && (*op == RuleOperator::SurfaceCoercion || *op == RuleOperator::DoubleArrow))
        detail::fail(st[i], "surface coercion of an epenthesis pair is not supported");
      const std::size_t ctx_begin = i + 2;
      std::size_t underscore = st.size();
      for (std::size_t k = ctx_begin; k < st.size(); ++k)
        if (st[k].is("_")) {
          if (underscore != st.size()) detail::fail(st[k], "more than one '_' in rule");
          underscore = k;
        }
      if (underscore == st.size()) detail::fail(head, "rule without '_' placeholder");
      rr.left = parse_context(st, ctx_begin, underscore);
      rr.right = parse_context(st, underscore + 1, st.size());
      auto& bucket = rr.rule.variant_only ? variant_rule_pairs : standard_rule_pairs;
      bucket.push_back(rr.rule.pair);
      for (auto* side : {&rr.left, &rr.right})
        for (const auto& item : *side)
          if (is_pair_token(item.text)) bucket.push_back(make_pair(item.token, false));
      raw_rules.push_back(std::move(rr));
    } else {
      detail::fail(head, "unknown statement '" + head.text + "'");
    }
  }

  // Alphabet: declared pairs, standard rule pairs, identities for every
  // surface symbol, then variant-only pairs.
  auto add = [&](PairSymbol p, bool variant) {
    for (std::size_t i = 0; i < rs.alphabet.size(); ++i)
      if (rs.alphabet[i] == p) return;
    rs.alphabet.push_back(p);
    rs.variant_pair.push_back(variant);
  };
  for (auto p : declared) add(p, false);
  for (auto p : standard_rule_pairs) add(p, false);
  {
    std::vector<SymbolId> surfaces;
    for (const auto& p : rs.alphabet)
      if (p.surface != kNull) surfaces.push_back(p.surface);
    for (auto s : surfaces) add({s, s}, false);
  }
  for (auto p : variant_rule_pairs) add(p, true);
  rs.reindex();

  auto resolve = [&](const RawItem& raw) {
    ContextItem item;
    item.source = raw.token.text;
    item.repeat = raw.repeat;
    if (is_pair_token(raw.text)) {
      auto [l, s] = split_pair(raw.text);
      const int idx = rs.pair_index({rs.symbols.intern(l), rs.symbols.intern(s)});
      if (idx >= 0) item.pairs.push_back(idx);
    } else if (auto it = rs.sets.find(raw.text); it != rs.sets.end()) {
      for (auto sym : it->second)
        for (int idx : rs.pairs_with_lexical(sym)) item.pairs.push_back(idx);
    } else {
      const auto sym = rs.symbols.find(strip_braces(raw.text));
      const bool single = utf8_split(raw.text).size() == 1 || (raw.text.front() == '{');
      if (sym < 0 || !single || !rs.is_lexical_symbol(sym))
        detail::fail(raw.token, "undefined set '" + raw.text + "'");
      item.pairs = rs.pairs_with_lexical(sym);
    }
    std::sort(item.pairs.begin(), item.pairs.end());
    item.pairs.erase(std::unique(item.pairs.begin(), item.pairs.end()), item.pairs.end());
    return item;
  };
  for (auto& rr : raw_rules) {
    for (const auto& r : rr.left) rr.rule.left.items.push_back(resolve(r));
    for (const auto& r : rr.right) rr.rule.right.items.push_back(resolve(r));
    rs.rules.push_back(std::move(rr.rule));
  }
  return rs;
}

std::set<PairSymbol> licensed_pairs(const RuleSet& rules, bool include_variants) {
  std::set<PairSymbol> out;
  for (std::size_t i = 0; i < rules.alphabet.size(); ++i)
    if (include_variants || !rules.variant_pair[i]) out.insert(rules.alphabet[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

/// Position automaton of a context pattern; state k sits before item k.
class ContextNfa {
 public:
  ContextNfa(const ContextPattern& pattern, std::size_t pair_count, bool unanchored, const std::string& rule) : unanchored_(unanchored) {
    for (const auto& item : pattern.items) {
      if (item.pairs.empty() && (item.repeat == Repeat::ExactlyOne || item.repeat == Repeat::OneOrMore))
        throw DataError("rule \"" + rule + "\": context item '" + item.source + "' matches no feasible pair; the context is empty");
      auto add = [&](Repeat r) {
        std::vector<char> m(pair_count, 0);
        for (int p : item.pairs) m[static_cast<std::size_t>(p)] = 1;
        member_.push_back(std::move(m));
        reps_.push_back(r);
      };
      if (item.repeat == Repeat::OneOrMore) {
        add(Repeat::ExactlyOne);
        add(Repeat::ZeroOrMore);
      } else {
        add(item.repeat);
      }
    }
    if (reps_.size() > 62) throw DataError("rule \"" + rule + "\": context too long");
  }

  std::size_t size() const { return reps_.size(); }
  bool matches(std::size_t item, int pair) const { return member_[item][static_cast<std::size_t>(pair)] != 0; }

  std::uint64_t closure(std::uint64_t s) const {
    for (std::size_t i = 0; i < reps_.size(); ++i)
      if ((s >> i & 1U) && (reps_[i] == Repeat::Optional || reps_[i] == Repeat::ZeroOrMore)) s |= std::uint64_t{1} << (i + 1);
    return s;
  }
  std::uint64_t start() const { return closure(1); }
  std::uint64_t step(std::uint64_t s, int pair) const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < reps_.size(); ++i) {
      if (!(s >> i & 1U) || !matches(i, pair)) continue;
      t |= std::uint64_t{1} << (reps_[i] == Repeat::ZeroOrMore ? i : i + 1);
    }
    if (unanchored_) t |= 1;
    return closure(t);
  }
  bool accepts(std::uint64_t s) const { return (s >> reps_.size()) & 1U; }

 private:
  std::vector<std::vector<char>> member_;
  std::vector<Repeat> reps_;
  bool unanchored_;
};

struct DfaState {
  std::uint64_t left = 0;
  std::vector<std::uint64_t> pending;  // anchored right-context runs that must succeed
  std::uint64_t forbidden = 0;         // union of right-context runs that must fail
  bool sink = false;

  auto key() const { return std::tie(sink, left, pending, forbidden); }
  bool operator<(const DfaState& o) const { return key() < o.key(); }
};

void normalize(std::vector<std::uint64_t>& runs) {
  std::sort(runs.begin(), runs.end());
  runs.erase(std::unique(runs.begin(), runs.end()), runs.end());
  // A run that is a subset of another implies it; keep only minimal runs.
  std::vector<std::uint64_t> kept;
  for (auto r : runs) {
    bool implied = false;
    for (auto o : runs)
      if (o != r && (o & r) == o) {
        implied = true;
        break;
      }
    if (!implied) kept.push_back(r);
  }
  runs = std::move(kept);
}

}  // namespace

std::size_t PairRecognizer::transitions_from(int state) const {
  (void)state;
  return class_count_;
}

bool PairRecognizer::accepts(std::span<const int> pairs) const {
  int s = start();
  for (int p : pairs) s = step(s, p);
  return accepting(s);
}

PairRecognizer compile_rule(const TwoLevelRule& rule, std::span<const PairSymbol> alphabet) {
  const std::size_t npairs = alphabet.size();
  const ContextNfa left(rule.left, npairs, true, rule.name);
  const ContextNfa right(rule.right, npairs, false, rule.name);
  const bool restricts = rule.op == RuleOperator::ContextRequirement || rule.op == RuleOperator::DoubleArrow;
  const bool coerces = rule.op == RuleOperator::SurfaceCoercion || rule.op == RuleOperator::DoubleArrow;
  const bool excludes = rule.op == RuleOperator::Exclusion;

  PairRecognizer out;

  // Pair classes: pairs indistinguishable by every test the rule makes.
  {
    std::map<std::vector<char>, int> signatures;
    out.class_of_.resize(npairs);
    for (std::size_t p = 0; p < npairs; ++p) {
      std::vector<char> sig;
      sig.push_back(alphabet[p] == rule.pair);
      sig.push_back(alphabet[p].lexical == rule.pair.lexical);
      for (std::size_t i = 0; i < left.size(); ++i) sig.push_back(left.matches(i, static_cast<int>(p)));
      for (std::size_t i = 0; i < right.size(); ++i) sig.push_back(right.matches(i, static_cast<int>(p)));
      auto [it, inserted] = signatures.emplace(std::move(sig), static_cast<int>(signatures.size()));
      out.class_of_[p] = it->second;
    }
    out.class_count_ = signatures.size();
  }
  std::vector<int> representative(out.class_count_, -1);
  for (std::size_t p = 0; p < npairs; ++p)
    if (representative[static_cast<std::size_t>(out.class_of_[p])] < 0) representative[static_cast<std::size_t>(out.class_of_[p])] = static_cast<int>(p);

  const std::uint64_t rstart = right.start();
  auto delta = [&](const DfaState& s, int pair) {
    DfaState t;
    if (s.sink) {
      t.sink = true;
      return t;
    }
    const bool left_ok = left.accepts(s.left);
    for (auto run : s.pending) {
      const auto next = right.step(run, pair);
      if (right.accepts(next)) continue;
      if (next == 0) {
        t.sink = true;
        return t;
      }
      t.pending.push_back(next);
    }
    if (s.forbidden) {
      t.forbidden = right.step(s.forbidden, pair);
      if (right.accepts(t.forbidden)) {
        t = DfaState{};
        t.sink = true;
        return t;
      }
    }
    const auto& p = alphabet[static_cast<std::size_t>(pair)];
    const bool center = p == rule.pair;
    if (restricts && center) {
      if (!left_ok) {
        t = DfaState{};
        t.sink = true;
        return t;
      }
      if (!right.accepts(rstart)) t.pending.push_back(rstart);
    }
    const bool forbid_here = left_ok && ((coerces && !center && p.lexical == rule.pair.lexical) || (excludes && center));
    if (forbid_here) {
      if (right.accepts(rstart)) {
        t = DfaState{};
        t.sink = true;
        return t;
      }
      t.forbidden |= rstart;
    }
    normalize(t.pending);
    t.left = left.step(s.left, pair);
    return t;
  };

  std::map<DfaState, int> ids;
  std::vector<DfaState> states;
  auto intern = [&](DfaState s) {
    if (s.sink) s = DfaState{.left = 0, .pending = {}, .forbidden = 0, .sink = true};
    auto [it, inserted] = ids.emplace(s, static_cast<int>(states.size()));
    if (inserted) states.push_back(std::move(s));
    return it->second;
  };
  DfaState initial;
  initial.left = left.start();
  intern(initial);
  out.sink_ = intern(DfaState{.left = 0, .pending = {}, .forbidden = 0, .sink = true});

  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t c = 0; c < out.class_count_; ++c) {
      const int target = intern(delta(states[i], representative[c]));
      out.table_.push_back(target);
    }
  }
  out.accepting_.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out.accepting_[i] = !states[i].sink && states[i].pending.empty();

  // live = can reach an accepting state
  out.live_ = out.accepting_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (out.live_[i]) continue;
      for (std::size_t c = 0; c < out.class_count_; ++c)
        if (out.live_[static_cast<std::size_t>(out.table_[i * out.class_count_ + c])]) {
          out.live_[i] = true;
          changed = true;
          break;
        }
    }
  }
  return out;
}

CompiledRules::CompiledRules(RuleSet rules) : rules_(std::move(rules)) {
  recognizers_.reserve(rules_.rules.size());
  for (const auto& r : rules_.rules) recognizers_.push_back(compile_rule(r, rules_.alphabet));
}

// ---------------------------------------------------------------------------
// Pairing

namespace {

class Aligner {
 public:
  Aligner(std::span<const SymbolId> lex, std::span<const SymbolId> surf, const CompiledRules& rules, const PairingOptions& opt)
      : lex_(lex), surf_(surf), rules_(rules), opt_(opt) {}

  int feasible(SymbolId l, SymbolId s) const {
    const int idx = rules_.rules().pair_index({l, s});
    if (idx < 0) return -1;
    if (!opt_.variants && rules_.rules().variant_pair[static_cast<std::size_t>(idx)]) return -1;
    return idx;
  }

  bool alignable() {
    const std::size_t n = lex_.size(), m = surf_.size();
    const std::size_t runs = static_cast<std::size_t>(opt_.max_null_run) + 1;
    std::vector<char> seen((n + 1) * (m + 1) * runs, 0);
    std::function<bool(std::size_t, std::size_t, int)> go = [&](std::size_t i, std::size_t j, int run) -> bool {
      if (i == n && j == m) return true;
      auto& mark = seen[(i * (m + 1) + j) * runs + static_cast<std::size_t>(run)];
      if (mark) return false;
      mark = 1;
      if (i < n && j < m && feasible(lex_[i], surf_[j]) >= 0 && go(i + 1, j + 1, 0)) return true;
      if (i < n && feasible(lex_[i], kNull) >= 0 && go(i + 1, j, 0)) return true;
      if (j < m && run < opt_.max_null_run && feasible(kNull, surf_[j]) >= 0 && go(i, j + 1, run + 1)) return true;
      return false;
    };
    return go(0, 0, 0);
  }

  bool accepted() {
    std::vector<int> states(rules_.recognizers().size(), 0);
    return search(0, 0, 0, states);
  }

 private:
  bool advance(std::vector<int>& states, int pair) const {
    const auto& recs = rules_.recognizers();
    for (std::size_t r = 0; r < recs.size(); ++r) {
      if (!rules_.active(r, opt_.variants)) continue;
      states[r] = recs[r].step(states[r], pair);
      if (!recs[r].live(states[r])) return false;
    }
    return true;
  }

  bool search(std::size_t i, std::size_t j, int run, const std::vector<int>& states) {
    const std::size_t n = lex_.size(), m = surf_.size();
    if (i == n && j == m) {
      const auto& recs = rules_.recognizers();
      for (std::size_t r = 0; r < recs.size(); ++r)
        if (rules_.active(r, opt_.variants) && !recs[r].accepting(states[r])) return false;
      return true;
    }
    auto attempt = [&](int pair, std::size_t ni, std::size_t nj, int nrun) {
      if (pair < 0) return false;
      auto next = states;
      return advance(next, pair) && search(ni, nj, nrun, next);
    };
    if (i < n && j < m && attempt(feasible(lex_[i], surf_[j]), i + 1, j + 1, 0)) return true;
    if (i < n && attempt(feasible(lex_[i], kNull), i + 1, j, 0)) return true;
    if (j < m && run < opt_.max_null_run && attempt(feasible(kNull, surf_[j]), i, j + 1, run + 1)) return true;
    return false;
  }

  std::span<const SymbolId> lex_;
  std::span<const SymbolId> surf_;
  const CompiledRules& rules_;
  const PairingOptions& opt_;
};

}  // namespace

Pairing check_pairing(std::span<const SymbolId> lexical, std::span<const SymbolId> surface, const CompiledRules& rules,
                      const PairingOptions& options) {
  Aligner a(lexical, surface, rules, options);
  if (!a.alignable()) return Pairing::NoAlignment;
  return a.accepted() ? Pairing::Accepted : Pairing::Rejected;
}

Pairing check_pairing(std::string_view lexical, std::string_view surface, const CompiledRules& rules,
                      const PairingOptions& options) {
  std::vector<SymbolId> l, s;
  for (const auto& sym : split_lexical(lexical)) {
    const auto id = rules.rules().symbols.find(sym);
    if (id < 0) return Pairing::NoAlignment;
    l.push_back(id);
  }
  for (const auto& sym : utf8_split(surface)) {
    const auto id = rules.rules().symbols.find(sym);
    if (id < 0) return Pairing::NoAlignment;
    s.push_back(id);
  }
  return check_pairing(l, s, rules, options);
}

}  // namespace euslem::twolevel
