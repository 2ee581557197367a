#pragma once

// Four-level tag projection.
//   1  category, with ellipsis composition, derivation mapping and compound index
//   2  level 1 plus subcategory (`VERB:SIMPLE`)
//   3  level 2 plus chosen feature values (`NOUN+ERG+SG`)
//   4  the canonical rendering of the whole analysis

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/analysis.hpp"
#include "euslem/analyzer.hpp"

namespace euslem::tagset {

inline constexpr std::size_t kDefaultCategoryCount = 17;

struct TagsetConfig {
  std::vector<std::string> categories;
  std::vector<std::string> open;
  std::map<std::string, std::vector<std::string>> subcategories;
  std::vector<std::string> level3_defaults;
  DerivationMap derivations;
  /// `{BASE}` and `{ECAT}` are substituted; depth > 1 appends `_<depth>`.
  std::string ellipsis_pattern = "{BASE}_WITH_{ECAT}_ELLIPSIS";

  bool has_category(std::string_view c) const;
  bool is_open(std::string_view c) const;
};

/// Throws ParseError on syntax errors, duplicate categories and derivation
/// targets that collide with a category.
TagsetConfig load_tagset(std::string_view text);

/// Conformance problems reported under `--strict` (category count other than 17).
std::vector<std::string> conformance_issues(const TagsetConfig& cfg);

std::string compose_ellipsis_tag(std::string_view base, std::span<const EllipsisSlot> chain, const TagsetConfig& cfg);

std::optional<std::string> apply_derivation_tag(std::string_view stem_category, std::string_view suffix_gloss,
                                                const TagsetConfig& cfg);

/// Empty `params` means the level-3 defaults. Throws DataError for an unknown category.
Tag project_tag(const Analysis& a, int level, std::span<const std::string> params, const TagsetConfig& cfg);

/// Attaches a tag to every reading. Throws Error on an empty cohort.
void tag_cohort(Cohort& c, int level, std::span<const std::string> params, const TagsetConfig& cfg);

}  // namespace euslem::tagset
