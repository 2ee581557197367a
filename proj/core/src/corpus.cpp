#include "euslem/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "euslem/error.hpp"

namespace euslem::corpus {

namespace {

bool terminal(std::string_view ch) { return ch == "." || ch == "?" || ch == "!"; }

bool punctuation(std::string_view ch) {
  static const std::set<std::string_view> marks = {".", ",", ";", ":", "!", "?", "(", ")", "\"", "'",
                                                   "\xC2\xAB", "\xC2\xBB", "\xE2\x80\x9C", "\xE2\x80\x9D"};
  return marks.count(ch) > 0;
}

}  // namespace

std::vector<std::vector<std::string>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> sentence;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) sentence.push_back(std::move(word));
    word.clear();
  };
  for (const auto& ch : utf8_split(text)) {
    if (ch.size() == 1 && std::isspace(static_cast<unsigned char>(ch[0]))) {
      flush();
    } else if (punctuation(ch)) {
      flush();
      sentence.push_back(ch);
      if (terminal(ch)) {
        out.push_back(std::move(sentence));
        sentence.clear();
      }
    } else {
      word += ch;
    }
  }
  flush();
  if (!sentence.empty()) out.push_back(std::move(sentence));
  return out;
}

std::size_t AnnotatedCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

// ---------------------------------------------------------------------------

namespace {

// Labels on tagged lines only need whitespace and '%' escaped.
std::string encode_label(std::string_view label) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (const char ch : label) {
    const auto b = static_cast<unsigned char>(ch);
    if (b <= 0x20 || b == 0x7f || ch == '%') {
      out += '%';
      out += hex[b >> 4];
      out += hex[b & 15];
    } else {
      out += ch;
    }
  }
  return out;
}

std::string render_tag(const Tag& t) {
  std::string params;
  for (std::size_t i = 0; i < t.params.size(); ++i) params += (i ? "," : "") + percent_encode(t.params[i]);
  return "TAG=" + std::to_string(t.level) + ":" + percent_encode(t.label) + ":" + params;
}

Tag parse_tag(std::string_view body) {
  const auto a = body.find(':');
  const auto b = a == std::string_view::npos ? a : body.find(':', a + 1);
  if (b == std::string_view::npos) throw Error("malformed TAG atom");
  Tag t;
  t.level = std::stoi(std::string(body.substr(0, a)));
  t.label = percent_decode(body.substr(a + 1, b - a - 1));
  auto rest = body.substr(b + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    t.params.push_back(percent_decode(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return t;
}

std::string render_reading(const Reading& r, WriteMode mode) {
  const bool complete = !r.analysis.category().empty();
  if (mode == WriteMode::Tagged && r.tag && r.tag->level != 4)
    return "\"" + percent_encode(r.analysis.lemma) + "\" " + encode_label(r.tag->label);
  if (!complete) {
    if (!r.tag) throw Error("reading of '" + r.analysis.lemma + "' has neither analysis nor tag");
    return "\"" + percent_encode(r.analysis.lemma) + "\" " + encode_label(r.tag->label);
  }
  if (mode == WriteMode::Tagged) return render_analysis(r.analysis);
  auto line = render_analysis(r.analysis);
  if (r.tag) line += " " + render_tag(*r.tag);
  return line;
}

Reading parse_reading(std::string_view text) {
  Reading r;
  std::string rest;
  bool full = false;
  std::optional<Tag> tag;
  std::size_t b = 0;
  while (b < text.size()) {
    auto e = text.find(' ', b);
    if (e == std::string_view::npos) e = text.size();
    const auto atom = text.substr(b, e - b);
    if (atom.substr(0, 4) == "TAG=") {
      tag = parse_tag(atom.substr(4));
    } else if (!atom.empty()) {
      if (atom.substr(0, 4) == "SRC=") full = true;
      if (!rest.empty()) rest += ' ';
      rest += atom;
    }
    b = e + 1;
  }
  if (full) {
    r.analysis = parse_analysis(rest);
    r.tag = tag;
    return r;
  }
  const auto space = rest.find(' ');
  const auto lemma = rest.substr(0, space);
  if (lemma.size() < 2 || lemma.front() != '"' || lemma.back() != '"' || space == std::string::npos)
    throw Error("expected '\"lemma\" LABEL'");
  r.analysis.lemma = percent_decode(std::string_view(lemma).substr(1, lemma.size() - 2));
  r.tag = Tag{0, percent_decode(rest.substr(space + 1)), {}};
  return r;
}

}  // namespace

AnnotatedCorpus read_cohorts(std::istream& in) {
  AnnotatedCorpus corpus;
  Sentence current;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.empty()) corpus.sentences.push_back(std::move(current));
      current.clear();
      continue;
    }
    if (line.front() == '\t') {
      if (current.empty()) throw ParseError("reading line without a preceding cohort header", number, 1);
      try {
        current.back().readings.push_back(parse_reading(std::string_view(line).substr(1)));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), number, 2);
      }
      continue;
    }
    if (line.size() >= 4 && line.compare(0, 2, "\"<") == 0 && line.compare(line.size() - 2, 2, ">\"") == 0) {
      current.push_back({line.substr(2, line.size() - 4), {}});
      continue;
    }
    throw ParseError("malformed line", number, 1);
  }
  if (!current.empty()) corpus.sentences.push_back(std::move(current));
  return corpus;
}

AnnotatedCorpus read_cohorts_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_cohorts(in);
}

void write_sentence(const Sentence& s, std::ostream& out, WriteMode mode) {
  for (const auto& c : s) {
    out << "\"<" << c.surface << ">\"\n";
    for (const auto& r : c.readings) out << '\t' << render_reading(r, mode) << '\n';
  }
  out << '\n';
}

void write_cohorts(const AnnotatedCorpus& corpus, std::ostream& out, WriteMode mode) {
  for (const auto& s : corpus.sentences) write_sentence(s, out, mode);
}

// ---------------------------------------------------------------------------

AmbiguityStats ambiguity_stats(const AnnotatedCorpus& corpus) {
  AmbiguityStats st;
  for (const auto& s : corpus.sentences)
    for (const auto& c : s) {
      ++st.tokens;
      st.total_readings += c.readings.size();
      if (c.readings.size() > 1) ++st.ambiguous_tokens;
      std::set<std::string> cats;
      for (const auto& r : c.readings) {
        auto cat = r.analysis.category();
        if (cat.empty() && r.tag) cat = r.tag->label;
        cats.insert(cat);
      }
      st.category_readings += cats.size();
      if (cats.size() > 1) ++st.category_ambiguous_tokens;
    }
  if (st.tokens == 0) throw Error("empty corpus");
  const auto n = static_cast<double>(st.tokens);
  st.ambiguity_rate = static_cast<double>(st.ambiguous_tokens) / n;
  st.readings_per_token = static_cast<double>(st.total_readings) / n;
  st.category_ambiguity_rate = static_cast<double>(st.category_ambiguous_tokens) / n;
  st.categories_per_token = static_cast<double>(st.category_readings) / n;
  return st;
}

double TagScore::precision() const {
  const auto d = true_positive + false_positive;
  return d ? static_cast<double>(true_positive) / static_cast<double>(d) : 0.0;
}

double TagScore::recall() const {
  const auto d = true_positive + false_negative;
  return d ? static_cast<double>(true_positive) / static_cast<double>(d) : 0.0;
}

std::string reading_label(const Reading& r, int level, std::span<const std::string> params,
                          const tagset::TagsetConfig& cfg) {
  if (!r.analysis.category().empty()) return tagset::project_tag(r.analysis, level, params, cfg).label;
  if (r.tag) return r.tag->label;
  throw Error("reading of '" + r.analysis.lemma + "' has neither analysis nor tag");
}

EvalReport evaluate(const AnnotatedCorpus& gold, const AnnotatedCorpus& system, int level,
                    std::span<const std::string> params, const tagset::TagsetConfig& cfg) {
  EvalReport rep;
  const auto ns = std::max(gold.sentences.size(), system.sentences.size());
  for (std::size_t i = 0; i < ns; ++i) {
    if (i >= gold.sentences.size() || i >= system.sentences.size())
      throw Error("token streams diverge at sentence " + std::to_string(i + 1) + ": sentence count differs");
    const auto& g = gold.sentences[i];
    const auto& s = system.sentences[i];
    for (std::size_t j = 0; j < std::max(g.size(), s.size()); ++j) {
      if (j >= g.size() || j >= s.size() || g[j].surface != s[j].surface)
        throw Error("token streams diverge at sentence " + std::to_string(i + 1) + ", token " + std::to_string(j + 1));
      if (g[j].readings.empty() || s[j].readings.empty())
        throw Error("empty cohort at sentence " + std::to_string(i + 1) + ", token " + std::to_string(j + 1));
      const auto gl = reading_label(g[j].readings.front(), level, params, cfg);
      const auto sl = reading_label(s[j].readings.front(), level, params, cfg);
      ++rep.tokens;
      if (gl == sl) {
        ++rep.correct;
        ++rep.per_tag[gl].true_positive;
      } else {
        ++rep.per_tag[gl].false_negative;
        ++rep.per_tag[sl].false_positive;
      }
    }
  }
  rep.accuracy = rep.tokens ? static_cast<double>(rep.correct) / static_cast<double>(rep.tokens) : 0.0;
  return rep;
}

}  // namespace euslem::corpus
