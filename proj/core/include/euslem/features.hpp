#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace euslem {

/// Ordered key=value feature set. Ordering gives a canonical rendering.
using FeatureSet = std::map<std::string, std::string, std::less<>>;

/// Separator used when a key is contributed twice along a path (`ABL>GEL`).
inline constexpr char kStackSeparator = '>';

/// Merges `add` into `into`; a key already present keeps its old value as a
/// stacked prefix.
void merge_features(FeatureSet& into, const FeatureSet& add);

/// Last component of a possibly stacked value.
std::string_view last_component(std::string_view value);

/// True when every pair in `spec` is present in `fs`.
bool includes(const FeatureSet& fs, const FeatureSet& spec);

/// `k=v,k=v` rendering; empty set renders as empty string.
std::string render_features(const FeatureSet& fs, char sep = ',');

/// Parses `k=v,k=v` (comma or whitespace separated).
FeatureSet parse_feature_list(std::string_view text);

std::optional<std::string> get(const FeatureSet& fs, std::string_view key);

}  // namespace euslem
