#include "euslem/features.hpp"

#include <cctype>

namespace euslem {

void merge_features(FeatureSet& into, const FeatureSet& add) {
  for (const auto& [k, v] : add) {
    auto it = into.find(k);
    if (it == into.end()) {
      into.emplace(k, v);
    } else {
      it->second += kStackSeparator;
      it->second += v;
    }
  }
}

std::string_view last_component(std::string_view value) {
  const auto pos = value.rfind(kStackSeparator);
  return pos == std::string_view::npos ? value : value.substr(pos + 1);
}

bool includes(const FeatureSet& fs, const FeatureSet& spec) {
  for (const auto& [k, v] : spec) {
    auto it = fs.find(k);
    if (it == fs.end() || it->second != v) return false;
  }
  return true;
}

std::string render_features(const FeatureSet& fs, char sep) {
  std::string out;
  for (const auto& [k, v] : fs) {
    if (!out.empty()) out += sep;
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

FeatureSet parse_feature_list(std::string_view text) {
  FeatureSet out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
    const auto start = i;
    while (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) break;
    const auto item = text.substr(start, i - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      out.emplace(std::string(item), "");
    } else {
      out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    }
  }
  return out;
}

std::optional<std::string> get(const FeatureSet& fs, std::string_view key) {
  auto it = fs.find(key);
  if (it == fs.end()) return std::nullopt;
  return it->second;
}

}  // namespace euslem
