#include "euslem/symbols.hpp"

#include "euslem/error.hpp"

namespace euslem {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) +
            (column ? ", column " + std::to_string(column) : std::string()) + ": " + message),
      bare_(message),
      line_(line),
      column_(column) {}

SymbolTable::SymbolTable() {
  names_.push_back("0");
  ids_.emplace("0", kNull);
}

SymbolId SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<SymbolId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(std::string(name), id);
  return id;
}

SymbolId SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? -1 : it->second;
}

std::vector<std::string> utf8_split(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    if (i + len > text.size()) len = 1;
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::vector<std::string> split_lexical(std::string_view form) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < form.size()) {
    if (form[i] == '{') {
      const auto close = form.find('}', i);
      if (close == std::string_view::npos) throw DataError("unterminated '{' in lexical form '" + std::string(form) + "'");
      out.emplace_back(form.substr(i + 1, close - i - 1));
      i = close + 1;
      continue;
    }
    auto rest = utf8_split(form.substr(i));
    if (rest.front() != "0") out.push_back(rest.front());
    i += rest.front().size();
  }
  return out;
}

bool lowercase_first(std::string& word) {
  if (word.empty()) return false;
  const auto c = static_cast<unsigned char>(word[0]);
  if (c >= 'A' && c <= 'Z') {
    word[0] = static_cast<char>(c - 'A' + 'a');
    return true;
  }
  // Latin-1 supplement uppercase (U+00C0..U+00DE except U+00D7), encoded C3 80..C3 9E.
  if (c == 0xC3 && word.size() > 1) {
    const auto d = static_cast<unsigned char>(word[1]);
    if (d >= 0x80 && d <= 0x9E && d != 0x97) {
      word[1] = static_cast<char>(d + 0x20);
      return true;
    }
  }
  return false;
}

}  // namespace euslem
