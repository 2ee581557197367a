#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace euslem {

using SymbolId = int;

/// NULL symbol on either tape of a two-level pairing. Written `0` in files.
inline constexpr SymbolId kNull = 0;

/// Interns symbols (UTF-8 code points or named multi-character archiphonemes).
class SymbolTable {
 public:
  SymbolTable();

  SymbolId intern(std::string_view name);
  /// Returns -1 when the symbol was never interned.
  SymbolId find(std::string_view name) const;
  const std::string& name(SymbolId id) const { return names_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> ids_;
};

/// Splits UTF-8 text into code points. Invalid bytes are kept as single-byte units.
std::vector<std::string> utf8_split(std::string_view text);

/// Splits a lexical form into symbols: `{Name}` is one multi-character symbol,
/// `0` is NULL and is dropped, everything else is one code point per symbol.
std::vector<std::string> split_lexical(std::string_view form);

/// Lowercases the first code point (ASCII and Latin-1 letters). Returns true if it changed.
bool lowercase_first(std::string& word);

}  // namespace euslem
