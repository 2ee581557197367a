#include <algorithm>
#include <cctype>

#include "euslem/disambiguator.hpp"
#include "euslem/error.hpp"
#include "scanner.hpp"

namespace euslem::disambiguator {

using detail::Token;

namespace {

/// Parses `( atom ... )` starting at `i`; returns the index after `)`.
std::size_t parse_pattern(const std::vector<Token>& st, std::size_t i, TagPattern& out) {
  if (i >= st.size() || !st[i].is("(")) detail::fail(i < st.size() ? st[i] : st.back(), "expected '('");
  const auto& open = st[i];
  ++i;
  while (i < st.size() && !st[i].is(")")) {
    if (st[i].is("(")) detail::fail(st[i], "unexpected '(' in pattern");
    if (st[i].quoted) out.lemmas.push_back(st[i].text);
    else out.atoms.push_back(st[i].text);
    ++i;
  }
  if (i >= st.size()) detail::fail(open, "unbalanced '('");
  if (out.atoms.empty() && out.lemmas.empty()) detail::fail(open, "empty pattern");
  return i + 1;
}

Condition parse_offset(const Token& t) {
  Condition c;
  const auto& s = t.text;
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = s[i++] == '-';
  const auto digits = i;
  int value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) value = value * 10 + (s[i++] - '0');
  if (i == digits) detail::fail(t, "expected an offset, got '" + s + "'");
  for (; i < s.size(); ++i) {
    if (s[i] == 'C' && !c.careful) c.careful = true;
    else if (s[i] == '*' && !c.scan) c.scan = true;
    else detail::fail(t, "bad offset modifier in '" + s + "'");
  }
  c.offset = negative ? -value : value;
  return c;
}

bool cohort_satisfies(const Cohort& c, const Condition& cond) {
  if (c.readings.empty()) return false;
  if (cond.careful)
    return std::all_of(c.readings.begin(), c.readings.end(), [&](const Reading& r) { return cond.pattern.matches(r); });
  return std::any_of(c.readings.begin(), c.readings.end(), [&](const Reading& r) { return cond.pattern.matches(r); });
}

bool condition_holds(const Sentence& s, std::size_t at, const Condition& cond) {
  const auto n = static_cast<long>(s.size());
  long p = static_cast<long>(at) + cond.offset;
  if (!cond.scan) return p >= 0 && p < n && cohort_satisfies(s[static_cast<std::size_t>(p)], cond);
  const long step = cond.offset < 0 ? -1 : 1;
  for (; p >= 0 && p < n; p += step)
    if (cohort_satisfies(s[static_cast<std::size_t>(p)], cond)) return true;
  return false;
}

}  // namespace

ConstraintGrammar parse_constraints(std::string_view text) {
  ConstraintGrammar g;
  for (const auto& st : detail::statements(detail::scan(text))) {
    if (st.empty()) continue;
    Constraint rule;
    rule.line = st[0].line;
    if (st[0].is("REMOVE")) rule.action = Action::Remove;
    else if (st[0].is("SELECT")) rule.action = Action::Select;
    else detail::fail(st[0], "expected REMOVE or SELECT");
    std::size_t i = parse_pattern(st, 1, rule.target);
    if (i < st.size()) {
      if (!st[i].is("IF")) detail::fail(st[i], "expected IF");
      ++i;
      if (i >= st.size()) detail::fail(st[i - 1], "IF without conditions");
      while (i < st.size()) {
        if (!st[i].is("(")) detail::fail(st[i], "expected '(' opening a condition");
        if (i + 1 >= st.size()) detail::fail(st[i], "incomplete condition");
        auto cond = parse_offset(st[i + 1]);
        i = parse_pattern(st, i + 2, cond.pattern);
        if (i >= st.size() || !st[i].is(")")) detail::fail(st[i - 1], "expected ')' closing the condition");
        ++i;
        rule.conditions.push_back(std::move(cond));
      }
    }
    g.rules.push_back(std::move(rule));
  }
  return g;
}

std::set<std::string> reading_atoms(const Reading& r) {
  std::set<std::string> out;
  const auto& a = r.analysis;
  if (auto c = a.category(); !c.empty()) out.insert(c);
  if (auto s = a.subcategory(); !s.empty()) out.insert(s);
  if (a.derived_category) out.insert(*a.derived_category);
  auto add = [&](const FeatureSet& fs) {
    for (const auto& [k, v] : fs) {
      if (k == kCategoryKey || k == kSubcategoryKey) continue;
      out.insert(v);
      out.insert(std::string(last_component(v)));
      out.insert(k + "=" + v);
    }
  };
  add(a.features);
  add(a.final_features());
  if (!a.ellipsis.empty()) out.insert("ELLIPSIS");
  if (a.compound) out.insert("COMPOUND");
  out.insert("SRC=" + std::string(to_string(a.source)));
  if (r.tag) out.insert(r.tag->label);
  return out;
}

bool TagPattern::matches(const Reading& r) const {
  for (const auto& l : lemmas)
    if (r.analysis.lemma != l) return false;
  if (atoms.empty()) return true;
  const auto have = reading_atoms(r);
  return std::all_of(atoms.begin(), atoms.end(), [&](const std::string& x) { return have.count(x) > 0; });
}

void apply_constraints(Sentence& sentence, const ConstraintGrammar& g) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : g.rules) {
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        auto& readings = sentence[i].readings;
        if (readings.size() < 2) continue;
        std::vector<char> keep(readings.size());
        std::size_t kept = 0;
        for (std::size_t k = 0; k < readings.size(); ++k) {
          const bool hit = rule.target.matches(readings[k]);
          keep[k] = rule.action == Action::Remove ? !hit : hit;
          kept += keep[k] ? 1 : 0;
        }
        if (kept == 0 || kept == readings.size()) continue;
        const bool context = std::all_of(rule.conditions.begin(), rule.conditions.end(),
                                         [&](const Condition& c) { return condition_holds(sentence, i, c); });
        if (!context) continue;
        std::vector<Reading> next;
        next.reserve(kept);
        for (std::size_t k = 0; k < readings.size(); ++k)
          if (keep[k]) next.push_back(std::move(readings[k]));
        readings = std::move(next);
        changed = true;
      }
    }
  }
}

}  // namespace euslem::disambiguator
