#pragma once

// Whitespace tokenizer shared by the rule, lexicon, tagset and constraint
// file parsers. `;`, `(` and `)` are always standalone tokens, `"..."` is one
// token (quotes stripped), `#` starts a comment to end of line except right
// after `->`, where it is the end marker.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/error.hpp"

namespace euslem::detail {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
  bool quoted = false;

  bool is(std::string_view s) const { return !quoted && text == s; }
};

std::vector<Token> scan(std::string_view text);

/// Groups tokens into `;`-terminated statements. A trailing statement without
/// `;` raises a ParseError.
std::vector<std::vector<Token>> statements(const std::vector<Token>& tokens);

[[noreturn]] void fail(const Token& at, const std::string& message);

}  // namespace euslem::detail
