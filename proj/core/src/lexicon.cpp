#include "euslem/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "euslem/error.hpp"
#include "scanner.hpp"

namespace euslem::lexicon {

using detail::Token;

bool LexEntry::zero_length() const { return split_lexical(form).empty(); }

const Sublexicon* Lexicon::find(std::string_view name) const {
  for (const auto& s : sublexicons)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

std::string lemma_of(std::string_view form) {
  std::string out;
  for (const auto& sym : split_lexical(form)) {
    if (sym == "+") continue;
    if (sym.size() > 1 && utf8_split(sym).size() > 1) continue;  // {Name}
    if (sym.size() == 1 && std::isupper(static_cast<unsigned char>(sym[0]))) continue;
    out += sym;
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string after_eq(const Token& t) {
  const auto eq = t.text.find('=');
  auto v = t.text.substr(eq + 1);
  if (v.empty()) detail::fail(t, "missing value in '" + t.text + "'");
  return v;
}

twolevel::Repeat pattern_repeat(std::string& text) {
  if (text.size() > 1 && text.back() == '*') {
    text.pop_back();
    return twolevel::Repeat::ZeroOrMore;
  }
  if (text.size() > 1 && text.back() == '+') {
    text.pop_back();
    return twolevel::Repeat::OneOrMore;
  }
  return twolevel::Repeat::ExactlyOne;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::span<const std::string> categories) : toks_(std::move(toks)), categories_(categories) {}

  Lexicon run() {
    std::size_t i = 0;
    while (i < toks_.size()) {
      if (toks_[i].is("SUBLEXICON")) {
        if (i + 1 >= toks_.size() || toks_[i + 1].quoted || toks_[i + 1].is(";")) detail::fail(toks_[i], "expected sublexicon name");
        open_section(toks_[i + 1]);
        i += 2;
        if (i < toks_.size() && toks_[i].is(";")) ++i;
        continue;
      }
      std::size_t end = i;
      while (end < toks_.size() && !toks_[end].is(";")) ++end;
      if (end == toks_.size()) detail::fail(toks_[i], "statement not terminated by ';'");
      statement(std::span<const Token>(toks_.data() + i, end - i));
      i = end + 1;
    }
    finish();
    return std::move(lex_);
  }

 private:
  void open_section(const Token& name) {
    if (lex_.find(name.text)) detail::fail(name, "duplicate sublexicon '" + name.text + "'");
    lex_.sublexicons.push_back({name.text, {}, name.line});
    current_ = lex_.sublexicons.size() - 1;
  }

  void check_category(const Token& at, const std::string& cat) {
    if (categories_.empty()) return;
    if (std::find(categories_.begin(), categories_.end(), cat) == categories_.end())
      detail::fail(at, "unknown category '" + cat + "'");
  }

  void statement(std::span<const Token> st) {
    const auto& head = st.front();
    if (head.is("ROOT")) {
      if (st.size() != 2) detail::fail(head, "expected 'ROOT <Name> ;'");
      root_token_ = st[1];
      lex_.root = st[1].text;
      return;
    }
    if (head.is("ELLIPSIS")) {
      if (st.size() < 3) detail::fail(head, "expected 'ELLIPSIS <Sublexicon> CASES=... ;'");
      EllipsisSpec spec;
      spec.target = st[1].text;
      ellipsis_token_ = st[1];
      for (std::size_t k = 2; k < st.size(); ++k) {
        if (starts_with(st[k].text, "CASES=")) {
          const auto v = after_eq(st[k]);
          std::size_t b = 0;
          while (b <= v.size()) {
            auto e = v.find(',', b);
            if (e == std::string::npos) e = v.size();
            if (e > b) spec.cases.insert(v.substr(b, e - b));
            b = e + 1;
          }
        } else if (starts_with(st[k].text, "CAT=")) {
          spec.category = after_eq(st[k]);
          check_category(st[k], spec.category);
        } else {
          detail::fail(st[k], "unexpected '" + st[k].text + "' in ELLIPSIS");
        }
      }
      if (spec.cases.empty()) detail::fail(head, "ELLIPSIS without CASES=");
      lex_.ellipsis = std::move(spec);
      return;
    }
    if (head.is("GENERIC")) {
      generic(st);
      return;
    }
    if (!current_) detail::fail(head, "entry outside any SUBLEXICON");
    entry(st);
  }

  void generic(std::span<const Token> st) {
    GenericLemma g;
    g.line = st[0].line;
    std::size_t k = 1;
    if (k >= st.size() || !starts_with(st[k].text, "CAT=")) detail::fail(st[0], "expected CAT= after GENERIC");
    g.category = after_eq(st[k]);
    check_category(st[k], g.category);
    ++k;
    if (k >= st.size() || !starts_with(st[k].text, "PATTERN=")) detail::fail(st[k - 1], "expected PATTERN=");
    std::vector<Token> items;
    if (st[k].text.size() > 8) {
      Token first = st[k];
      first.text = st[k].text.substr(8);
      items.push_back(first);
    }
    ++k;
    while (k < st.size() && !st[k].is("->")) items.push_back(st[k++]);
    if (k + 2 != st.size()) detail::fail(st[0], "expected '-> <Continuation> ;' after the pattern");
    g.continuation = st[k + 1].text;
    continuation_refs_.emplace_back(st[k + 1], g.continuation);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].is("(")) {
        if (i + 2 >= items.size() || !items[i + 2].is(")")) detail::fail(items[i], "expected '(item)'");
        g.pattern.push_back({items[i + 1].text, twolevel::Repeat::Optional});
        i += 2;
        continue;
      }
      auto text = items[i].text;
      const auto rep = pattern_repeat(text);
      g.pattern.push_back({text, rep});
    }
    if (g.pattern.empty()) detail::fail(st[0], "empty PATTERN");
    lex_.generics.push_back(std::move(g));
  }

  void entry(std::span<const Token> st) {
    auto& sub = lex_.sublexicons[*current_];
    LexEntry e;
    e.line = st[0].line;
    if (st[0].quoted) detail::fail(st[0], "expected a lexical form");
    e.form = st[0].text;
    std::size_t k = 1;
    if (k < st.size() && st[k].quoted) e.gloss = st[k++].text;
    bool in_features = false;
    while (k < st.size() && !st[k].is("->")) {
      const auto& t = st[k];
      if (t.quoted) detail::fail(t, "unexpected string");
      if (starts_with(t.text, "CAT=")) {
        e.category = after_eq(t);
        check_category(t, e.category);
        in_features = false;
      } else if (starts_with(t.text, "SUB=")) {
        e.subcategory = after_eq(t);
        in_features = false;
      } else if (t.is("F")) {
        in_features = true;
      } else if (t.is("NONSTD")) {
        e.standard = false;
        in_features = false;
      } else if (in_features && t.text.find('=') != std::string::npos && t.text.front() != '=') {
        const auto eq = t.text.find('=');
        e.features[t.text.substr(0, eq)] = after_eq(t);
      } else {
        detail::fail(t, "unexpected '" + t.text + "' in entry");
      }
      ++k;
    }
    if (k + 2 != st.size()) detail::fail(k < st.size() ? st[k] : st.back(), "expected '-> <Continuation> ;'");
    e.continuation = st[k + 1].text;
    continuation_refs_.emplace_back(st[k + 1], e.continuation);
    for (const auto& other : sub.entries)
      if (other.form == e.form && other.continuation == e.continuation)
        detail::fail(st[0], "duplicate entry '" + e.form + " -> " + e.continuation + "' in " + sub.name);
    if (!e.subcategory.empty() && e.category.empty()) detail::fail(st[0], "SUB= without CAT=");
    sub.entries.push_back(std::move(e));
  }

  void finish() {
    if (lex_.sublexicons.empty()) throw ParseError("no root sublexicon", toks_.empty() ? 1 : toks_.back().line);
    if (lex_.root.empty()) lex_.root = lex_.sublexicons.front().name;
    if (!lex_.find(lex_.root)) detail::fail(root_token_, "unknown root sublexicon '" + lex_.root + "'");
    for (const auto& [tok, name] : continuation_refs_)
      if (name != kEnd && !lex_.find(name)) detail::fail(tok, "unknown continuation '" + name + "'");
    if (lex_.ellipsis && !lex_.find(lex_.ellipsis->target))
      detail::fail(ellipsis_token_, "unknown ellipsis target '" + lex_.ellipsis->target + "'");
    for (auto& sub : lex_.sublexicons) {
      const bool is_root = sub.name == lex_.root;
      for (auto& e : sub.entries) {
        if (is_root && !e.category.empty()) e.lemma = lemma_of(e.form);
        if (is_root && e.category.empty())
          throw ParseError("stem entry '" + e.form + "' has no CAT=", e.line);
      }
    }
  }

  std::vector<Token> toks_;
  std::span<const std::string> categories_;
  Lexicon lex_;
  std::optional<std::size_t> current_;
  std::vector<std::pair<Token, std::string>> continuation_refs_;
  Token root_token_;
  Token ellipsis_token_;
};

}  // namespace

Lexicon parse_lexicon(std::string_view text, std::span<const std::string> categories) {
  return Parser(detail::scan(text), categories).run();
}

std::vector<Diagnostic> validate_lexicon(const Lexicon& lex) {
  std::vector<Diagnostic> out;
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < lex.sublexicons.size(); ++i) index[lex.sublexicons[i].name] = i;

  // reachability
  std::vector<bool> seen(lex.sublexicons.size(), false);
  std::vector<std::size_t> stack;
  auto visit = [&](std::string_view name) {
    auto it = index.find(name);
    if (it != index.end() && !seen[it->second]) {
      seen[it->second] = true;
      stack.push_back(it->second);
    }
  };
  visit(lex.root);
  if (lex.ellipsis) visit(lex.ellipsis->target);
  for (const auto& g : lex.generics) visit(g.continuation);
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (const auto& e : lex.sublexicons[s].entries) visit(e.continuation);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      out.push_back({Diagnostic::Severity::Warning, "sublexicon '" + lex.sublexicons[i].name + "' is unreachable",
                     lex.sublexicons[i].line});

  // variant entries identical to a standard entry never contribute
  for (const auto& sub : lex.sublexicons)
    for (const auto& e : sub.entries) {
      if (e.standard) continue;
      for (const auto& o : sub.entries)
        if (o.standard && o.form == e.form && o.features == e.features && o.category == e.category) {
          out.push_back({Diagnostic::Severity::Warning, "NONSTD entry '" + e.form + "' in " + sub.name + " is shadowed", e.line});
          break;
        }
    }

  // cycles through zero-length entries
  std::vector<int> color(lex.sublexicons.size(), 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t s) -> bool {
    color[s] = 1;
    for (const auto& e : lex.sublexicons[s].entries) {
      if (!e.zero_length()) continue;
      auto it = index.find(e.continuation);
      if (it == index.end()) continue;
      if (color[it->second] == 1) {
        out.push_back({Diagnostic::Severity::Error,
                       "cycle of zero-length continuations through '" + lex.sublexicons[it->second].name + "'", e.line});
        return true;
      }
      if (color[it->second] == 0 && dfs(it->second)) return true;
    }
    color[s] = 2;
    return false;
  };
  for (std::size_t s = 0; s < lex.sublexicons.size(); ++s)
    if (color[s] == 0 && dfs(s)) break;
  return out;
}

}  // namespace euslem::lexicon
