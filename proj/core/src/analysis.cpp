#include "euslem/analysis.hpp"

#include <cctype>
#include <charconv>

#include "euslem/error.hpp"
#include "euslem/symbols.hpp"

namespace euslem {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Lexicon: return "lexicon";
    case Source::Variant: return "variant";
    case Source::Guesser: return "guesser";
  }
  return "?";
}

std::string Analysis::category() const { return get(features, kCategoryKey).value_or(""); }
std::string Analysis::subcategory() const { return get(features, kSubcategoryKey).value_or(""); }

std::string Analysis::lexical() const {
  std::string out;
  for (const auto& s : segments)
    if (s.lexical != "0") out += s.lexical;
  return out;
}

FeatureSet Analysis::final_features() const {
  FeatureSet out = features;
  if (!ellipsis.empty())
    for (const auto& [k, v] : ellipsis.back().inflection) out[k] = v;
  return out;
}

namespace {

bool reserved(unsigned char c) {
  return c <= 0x20 || c == 0x7f || c == '%' || c == '"' || c == '=' || c == '|' || c == '{' || c == '}' || c == ',' ||
         c == ':';
}

char role_char(SegmentRole r) {
  switch (r) {
    case SegmentRole::Stem: return 's';
    case SegmentRole::Inflection: return 'i';
    case SegmentRole::Derivation: return 'd';
    case SegmentRole::Boundary: return 'b';
  }
  return '?';
}

SegmentRole role_from(char c) {
  switch (c) {
    case 's': return SegmentRole::Stem;
    case 'i': return SegmentRole::Inflection;
    case 'd': return SegmentRole::Derivation;
    case 'b': return SegmentRole::Boundary;
  }
  throw Error("bad segment role '" + std::string(1, c) + "'");
}

std::string render_pairs(const FeatureSet& fs, bool skip_category) {
  std::string out;
  for (const auto& [k, v] : fs) {
    if (skip_category && (k == kCategoryKey || k == kSubcategoryKey)) continue;
    if (!out.empty()) out += ',';
    out += percent_encode(k) + "=" + percent_encode(v);
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  while (true) {
    const auto e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

FeatureSet parse_pairs(std::string_view s) {
  FeatureSet fs;
  if (s.empty()) return fs;
  for (auto part : split(s, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw Error("malformed feature '" + std::string(part) + "'");
    fs[percent_decode(part.substr(0, eq))] = percent_decode(part.substr(eq + 1));
  }
  return fs;
}

std::size_t to_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error("bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string percent_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (reserved(c)) {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string render_analysis(const Analysis& a) {
  std::string out = "\"" + percent_encode(a.lemma) + "\"";
  out += ' ';
  out += percent_encode(a.category());
  if (auto sub = get(a.features, kSubcategoryKey)) out += " SUB=" + percent_encode(*sub);
  if (a.derived_category) out += " DER=" + percent_encode(*a.derived_category);
  for (const auto& [k, v] : a.features) {
    if (k == kCategoryKey || k == kSubcategoryKey) continue;
    out += ' ' + percent_encode(k) + '=' + percent_encode(v);
  }
  for (const auto& slot : a.ellipsis) out += " ELL=" + percent_encode(slot.category) + "{" + render_pairs(slot.inflection, false) + "}";
  if (a.compound) out += " CMP=" + std::to_string(a.compound->position) + "/" + std::to_string(a.compound->length);
  out += " SRC=";
  out += to_string(a.source);
  if (!a.standard) out += " NONSTD";
  if (!a.segments.empty()) {
    out += " SEG=";
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
      const auto& s = a.segments[i];
      if (i) out += '|';
      out += role_char(s.role);
      out += ':' + percent_encode(s.lexical) + ':' + std::to_string(s.begin) + ':' + std::to_string(s.end) + ':' +
             percent_encode(s.gloss) + ':' + render_pairs(s.features, false);
    }
  }
  return out;
}

Analysis parse_analysis(std::string_view text) {
  Analysis a;
  std::vector<std::string_view> atoms;
  for (auto part : split(text, ' '))
    if (!part.empty()) atoms.push_back(part);
  if (atoms.empty() || atoms[0].size() < 2 || atoms[0].front() != '"' || atoms[0].back() != '"')
    throw Error("reading must start with a quoted lemma");
  a.lemma = percent_decode(atoms[0].substr(1, atoms[0].size() - 2));
  bool have_category = false;
  bool have_source = false;
  auto starts = [](std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; };
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    const auto atom = atoms[i];
    if (atom == "NONSTD") {
      a.standard = false;
    } else if (starts(atom, "SRC=")) {
      const auto v = atom.substr(4);
      if (v == "lexicon") a.source = Source::Lexicon;
      else if (v == "variant") a.source = Source::Variant;
      else if (v == "guesser") a.source = Source::Guesser;
      else throw Error("unknown source '" + std::string(v) + "'");
      have_source = true;
    } else if (starts(atom, "SUB=")) {
      a.features[std::string(kSubcategoryKey)] = percent_decode(atom.substr(4));
    } else if (starts(atom, "DER=")) {
      a.derived_category = percent_decode(atom.substr(4));
    } else if (starts(atom, "ELL=")) {
      const auto body = atom.substr(4);
      const auto open = body.find('{');
      if (open == std::string_view::npos || body.back() != '}') throw Error("malformed ELL atom");
      EllipsisSlot slot;
      slot.category = percent_decode(body.substr(0, open));
      slot.inflection = parse_pairs(body.substr(open + 1, body.size() - open - 2));
      a.ellipsis.push_back(std::move(slot));
    } else if (starts(atom, "CMP=")) {
      const auto body = atom.substr(4);
      const auto slash = body.find('/');
      if (slash == std::string_view::npos) throw Error("malformed CMP atom");
      a.compound = CompoundIndex{static_cast<int>(to_size(body.substr(0, slash))), static_cast<int>(to_size(body.substr(slash + 1)))};
    } else if (starts(atom, "SEG=")) {
      for (auto seg : split(atom.substr(4), '|')) {
        const auto f = split(seg, ':');
        if (f.size() != 6 || f[0].size() != 1) throw Error("malformed segment '" + std::string(seg) + "'");
        MorphemeSegment s;
        s.role = role_from(f[0][0]);
        s.lexical = percent_decode(f[1]);
        s.begin = to_size(f[2]);
        s.end = to_size(f[3]);
        s.gloss = percent_decode(f[4]);
        s.features = parse_pairs(f[5]);
        a.segments.push_back(std::move(s));
      }
    } else if (atom.find('=') != std::string_view::npos) {
      const auto eq = atom.find('=');
      a.features[percent_decode(atom.substr(0, eq))] = percent_decode(atom.substr(eq + 1));
    } else {
      if (have_category) throw Error("second category atom '" + std::string(atom) + "'");
      a.features[std::string(kCategoryKey)] = percent_decode(atom);
      have_category = true;
    }
  }
  if (!have_category) throw Error("reading without category");
  if (!have_source) throw Error("reading without SRC=");
  return a;
}

Analysis fallback_analysis(std::string_view token) {
  bool all_digits = !token.empty(), all_punct = !token.empty(), any_letter = false;
  for (unsigned char c : token) {
    if (!std::isdigit(c)) all_digits = false;
    if (!std::ispunct(c)) all_punct = false;
    if (std::isalpha(c) || c >= 0x80) any_letter = true;
  }
  Analysis a;
  a.lemma = std::string(token);
  const char* cat = all_digits ? "NUMERAL" : all_punct ? "PUNCTUATION" : any_letter ? "NOUN" : "SYMBOL";
  a.features[std::string(kCategoryKey)] = cat;
  a.source = Source::Guesser;
  a.segments.push_back({std::string(token), 0, utf8_split(token).size(), "", {}, SegmentRole::Stem});
  return a;
}

}  // namespace euslem
