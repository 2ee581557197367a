#include "euslem/tagset.hpp"

#include <algorithm>

#include "euslem/error.hpp"
#include "scanner.hpp"

namespace euslem::tagset {

bool TagsetConfig::has_category(std::string_view c) const {
  return std::find(categories.begin(), categories.end(), c) != categories.end();
}

bool TagsetConfig::is_open(std::string_view c) const { return std::find(open.begin(), open.end(), c) != open.end(); }

TagsetConfig load_tagset(std::string_view text) {
  TagsetConfig cfg;
  std::vector<detail::Token> deriv_targets;
  std::vector<detail::Token> refs;  // category references checked after all CATEGORY lines
  for (const auto& st : detail::statements(detail::scan(text))) {
    if (st.empty()) continue;
    const auto& head = st.front();
    if (head.is("CATEGORY")) {
      if (st.size() != 2) detail::fail(head, "expected 'CATEGORY <id> ;'");
      if (cfg.has_category(st[1].text)) detail::fail(st[1], "duplicate category '" + st[1].text + "'");
      cfg.categories.push_back(st[1].text);
    } else if (head.is("OPEN")) {
      for (std::size_t i = 1; i < st.size(); ++i) {
        refs.push_back(st[i]);
        cfg.open.push_back(st[i].text);
      }
    } else if (head.is("SUBCAT")) {
      if (st.size() < 3) detail::fail(head, "expected 'SUBCAT <cat> <id> ... ;'");
      refs.push_back(st[1]);
      auto& subs = cfg.subcategories[st[1].text];
      for (std::size_t i = 2; i < st.size(); ++i) subs.push_back(st[i].text);
    } else if (head.is("L3DEFAULT")) {
      cfg.level3_defaults.clear();
      for (std::size_t i = 1; i < st.size(); ++i) cfg.level3_defaults.push_back(st[i].text);
    } else if (head.is("DERIV")) {
      if (st.size() != 6 || !st[2].is("+") || !st[4].is("->")) detail::fail(head, "expected 'DERIV <cat> + <suffix> -> <id> ;'");
      refs.push_back(st[1]);
      deriv_targets.push_back(st[5]);
      cfg.derivations[{st[1].text, st[3].text}] = st[5].text;
    } else if (head.is("ELLIPSIS_TAG")) {
      if (st.size() != 2 || !st[1].quoted) detail::fail(head, "expected 'ELLIPSIS_TAG \"<pattern>\" ;'");
      cfg.ellipsis_pattern = st[1].text;
    } else {
      detail::fail(head, "unknown statement '" + head.text + "'");
    }
  }
  for (const auto& r : refs)
    if (!cfg.has_category(r.text)) detail::fail(r, "unknown category '" + r.text + "'");
  for (const auto& t : deriv_targets)
    if (cfg.has_category(t.text)) detail::fail(t, "derivation target '" + t.text + "' collides with a category");
  return cfg;
}

std::vector<std::string> conformance_issues(const TagsetConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.categories.size() != kDefaultCategoryCount)
    out.push_back("tagset declares " + std::to_string(cfg.categories.size()) + " categories, expected " +
                  std::to_string(kDefaultCategoryCount));
  return out;
}

std::string compose_ellipsis_tag(std::string_view base, std::span<const EllipsisSlot> chain, const TagsetConfig& cfg) {
  if (chain.empty()) return std::string(base);
  auto replace = [](std::string s, std::string_view key, std::string_view value) {
    for (auto p = s.find(key); p != std::string::npos; p = s.find(key, p + value.size())) s.replace(p, key.size(), value);
    return s;
  };
  auto out = replace(cfg.ellipsis_pattern, "{BASE}", base);
  out = replace(std::move(out), "{ECAT}", chain.back().category);
  if (chain.size() > 1) out += "_" + std::to_string(chain.size());
  return out;
}

std::optional<std::string> apply_derivation_tag(std::string_view stem_category, std::string_view suffix_gloss,
                                                const TagsetConfig& cfg) {
  auto it = cfg.derivations.find({std::string(stem_category), std::string(suffix_gloss)});
  if (it == cfg.derivations.end()) return std::nullopt;
  return it->second;
}

Tag project_tag(const Analysis& a, int level, std::span<const std::string> params, const TagsetConfig& cfg) {
  if (level < 1 || level > 4) throw Error("tag level must be 1..4, got " + std::to_string(level));
  const auto cat = a.category();
  if (!cfg.has_category(cat)) throw DataError("unknown category '" + cat + "' for lemma '" + a.lemma + "'");
  Tag tag;
  tag.level = level;
  if (level == 4) {
    tag.label = render_analysis(a);
    return tag;
  }
  const std::string base = a.derived_category.value_or(cat);
  std::string label = compose_ellipsis_tag(base, a.ellipsis, cfg);
  if (level >= 2) {
    if (auto sub = get(a.features, kSubcategoryKey)) label += ":" + *sub;
  }
  if (level == 3) {
    const auto keys = params.empty() ? std::span<const std::string>(cfg.level3_defaults) : params;
    const auto fs = a.final_features();
    for (const auto& k : keys) {
      if (auto v = get(fs, k)) label += "+" + *v;
      else label += "+" + k + "=\xE2\x88\x85";
    }
    tag.params.assign(keys.begin(), keys.end());
  }
  if (a.compound) label += "(" + std::to_string(a.compound->position) + ")";
  tag.label = std::move(label);
  return tag;
}

void tag_cohort(Cohort& c, int level, std::span<const std::string> params, const TagsetConfig& cfg) {
  if (c.readings.empty()) throw Error("empty cohort '" + c.surface + "'");
  for (auto& r : c.readings) r.tag = project_tag(r.analysis, level, params, cfg);
}

}  // namespace euslem::tagset
