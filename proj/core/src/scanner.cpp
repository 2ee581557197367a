#include "scanner.hpp"

#include <cctype>

namespace euslem::detail {

std::vector<Token> scan(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' && !(!out.empty() && out.back().is("->"))) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (c == ';' || c == '(' || c == ')' || c == '#') {
      tok.text = std::string(1, c);
      advance(1);
    } else if (c == '"') {
      const auto close = text.find('"', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated string", line, col);
      tok.text = std::string(text.substr(i + 1, close - i - 1));
      tok.quoted = true;
      advance(close - i + 1);
    } else {
      const auto start = i;
      while (i < text.size()) {
        const char d = text[i];
        if (std::isspace(static_cast<unsigned char>(d)) || d == ';' || d == '(' || d == ')' || d == '"' || d == '#') break;
        advance(1);
      }
      tok.text = std::string(text.substr(start, i - start));
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<std::vector<Token>> statements(const std::vector<Token>& tokens) {
  std::vector<std::vector<Token>> out;
  std::vector<Token> current;
  for (const auto& t : tokens) {
    if (t.is(";")) {
      out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(t);
    }
  }
  if (!current.empty()) fail(current.front(), "statement not terminated by ';'");
  return out;
}

void fail(const Token& at, const std::string& message) { throw ParseError(message, at.line, at.column); }

}  // namespace euslem::detail
