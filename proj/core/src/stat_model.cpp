#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "euslem/disambiguator.hpp"
#include "euslem/error.hpp"

namespace euslem::disambiguator {

void StatModel::finalize() {
  row_totals_.clear();
  lemma_tag_totals_.clear();
  form_tag_totals_.clear();
  for (const auto& [h, row] : transitions)
    for (const auto& [t, c] : row) row_totals_[h] += c;
  for (const auto& [l, row] : emit_lemma)
    for (const auto& [t, c] : row) lemma_tag_totals_[t] += c;
  for (const auto& [f, row] : emit_form)
    for (const auto& [t, c] : row) form_tag_totals_[t] += c;
}

namespace {

std::size_t lookup(const CountTable& table, std::string_view a, std::string_view b) {
  auto it = table.find(std::string(a));
  if (it == table.end()) return 0;
  auto jt = it->second.find(std::string(b));
  return jt == it->second.end() ? 0 : jt->second;
}

std::size_t lookup(const std::map<std::string, std::size_t, std::less<>>& m, std::string_view k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

double StatModel::transition(std::string_view history, std::string_view tag) const {
  const double c = static_cast<double>(lookup(transitions, history, tag));
  const double total = static_cast<double>(lookup(row_totals_, history));
  const double t = static_cast<double>(std::max<std::size_t>(inventory.size(), 1));
  return (c + lambda) / (total + lambda * t);
}

double StatModel::emission(std::string_view form, std::string_view lemma, std::string_view tag) const {
  auto smoothed = [&](const CountTable& table, const std::map<std::string, std::size_t, std::less<>>& totals,
                      std::string_view key) {
    const double c = static_cast<double>(lookup(table, key, tag));
    const double total = static_cast<double>(lookup(totals, tag));
    const double v = static_cast<double>(table.size() + 1);
    return (c + lambda) / (total + lambda * v);
  };
  if (emit_form.count(std::string(form))) return smoothed(emit_form, form_tag_totals_, form);
  if (emit_lemma.count(std::string(lemma))) return smoothed(emit_lemma, lemma_tag_totals_, lemma);
  return 1.0 / static_cast<double>(std::max<std::size_t>(inventory.size(), 1));
}

std::string StatModel::history(std::span<const std::string> previous) const {
  const std::size_t width = order == 3 ? 2 : 1;
  std::vector<std::string> h;
  for (std::size_t k = 0; k < width; ++k) {
    if (previous.size() + k < width) h.emplace_back(kStartTag);
    else h.push_back(previous[previous.size() + k - width]);
  }
  std::string out = h.front();
  for (std::size_t k = 1; k < h.size(); ++k) out += "|" + h[k];
  return out;
}

StatModel train_model(const corpus::AnnotatedCorpus& gold, int order, int level, std::span<const std::string> params,
                      double lambda, const tagset::TagsetConfig& cfg, std::span<const std::string> extra_tags) {
  if (order != 2 && order != 3) throw Error("model order must be 2 or 3");
  if (level < 1 || level > 4) throw Error("tag level must be 1..4");
  if (!(lambda > 0)) throw Error("lambda must be > 0");
  if (gold.token_count() == 0) throw Error("empty training corpus");
  StatModel m;
  m.order = order;
  m.level = level;
  m.params.assign(params.begin(), params.end());
  m.lambda = lambda;
  std::set<std::string> inventory(extra_tags.begin(), extra_tags.end());
  inventory.insert(std::string(kEndTag));
  for (std::size_t si = 0; si < gold.sentences.size(); ++si) {
    const auto& s = gold.sentences[si];
    std::vector<std::string> tags;
    for (std::size_t ti = 0; ti < s.size(); ++ti) {
      const auto& c = s[ti];
      if (c.readings.size() != 1)
        throw Error("token '" + c.surface + "' (sentence " + std::to_string(si + 1) + ", token " + std::to_string(ti + 1) +
                    ") has " + std::to_string(c.readings.size()) + " readings; training needs exactly one");
      const auto& r = c.readings.front();
      auto tag = corpus::reading_label(r, level, params, cfg);
      ++m.transitions[m.history(tags)][tag];
      ++m.emit_lemma[r.analysis.lemma][tag];
      ++m.emit_form[c.surface][tag];
      inventory.insert(tag);
      tags.push_back(std::move(tag));
    }
    if (!s.empty()) ++m.transitions[m.history(tags)][std::string(kEndTag)];
  }
  m.inventory.assign(inventory.begin(), inventory.end());
  m.finalize();
  return m;
}

void save_model(const StatModel& m, std::ostream& out) {
  std::ostringstream lambda;
  lambda << std::setprecision(17) << m.lambda;
  out << "MODEL order=" << m.order << " level=" << m.level << " lambda=" << lambda.str();
  if (!m.params.empty()) {
    out << " params=";
    for (std::size_t i = 0; i < m.params.size(); ++i) out << (i ? "," : "") << m.params[i];
  }
  out << "\nTAGS\n";
  for (const auto& t : m.inventory) out << t << '\n';
  auto dump = [&](const char* name, const CountTable& table) {
    out << name << '\n';
    for (const auto& [k, row] : table)
      for (const auto& [t, c] : row) out << k << '\t' << t << '\t' << c << '\n';
  };
  dump("TRANSITIONS", m.transitions);
  dump("EMIT-LEMMA", m.emit_lemma);
  dump("EMIT-FORM", m.emit_form);
}

StatModel load_model(std::istream& in) {
  StatModel m;
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw ParseError("empty model file", 1);
  ++number;
  {
    std::istringstream header(line);
    std::string word;
    header >> word;
    if (word != "MODEL") throw ParseError("expected 'MODEL' header", 1, 1);
    bool have_order = false, have_level = false, have_lambda = false;
    while (header >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) throw ParseError("malformed header field '" + word + "'", 1);
      const auto key = word.substr(0, eq);
      const auto value = word.substr(eq + 1);
      try {
        if (key == "order") m.order = std::stoi(value), have_order = true;
        else if (key == "level") m.level = std::stoi(value), have_level = true;
        else if (key == "lambda") m.lambda = std::stod(value), have_lambda = true;
        else if (key == "params") {
          std::istringstream ps(value);
          for (std::string p; std::getline(ps, p, ',');)
            if (!p.empty()) m.params.push_back(p);
        } else {
          throw ParseError("unknown header field '" + key + "'", 1);
        }
      } catch (const std::logic_error&) {
        throw ParseError("bad value in header field '" + word + "'", 1);
      }
    }
    if (!have_order || !have_level || !have_lambda) throw ParseError("header needs order=, level= and lambda=", 1);
    if ((m.order != 2 && m.order != 3) || m.level < 1 || m.level > 4 || !(m.lambda > 0))
      throw ParseError("header values out of range", 1);
  }
  CountTable* table = nullptr;
  bool in_tags = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "TAGS") {
      in_tags = true;
      table = nullptr;
      continue;
    }
    if (line == "TRANSITIONS" || line == "EMIT-LEMMA" || line == "EMIT-FORM") {
      in_tags = false;
      table = line == "TRANSITIONS" ? &m.transitions : line == "EMIT-LEMMA" ? &m.emit_lemma : &m.emit_form;
      continue;
    }
    if (in_tags) {
      m.inventory.push_back(line);
      continue;
    }
    if (!table) throw ParseError("line outside any section", number, 1);
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError("expected 'history<TAB>tag<TAB>count'", number, 1);
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(t2 + 1), &used);
      if (used != line.size() - t2 - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("bad count", number, t2 + 2);
    }
    (*table)[line.substr(0, t1)][line.substr(t1 + 1, t2 - t1 - 1)] += count;
  }
  if (std::find(m.inventory.begin(), m.inventory.end(), kEndTag) == m.inventory.end())
    m.inventory.emplace_back(kEndTag);
  m.finalize();
  return m;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> sentence_tags(const Sentence& s, const StatModel& m, const tagset::TagsetConfig& cfg) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : s) {
    out.emplace_back();
    for (const auto& r : c.readings) out.back().push_back(corpus::reading_label(r, m.level, m.params, cfg));
  }
  return out;
}

std::vector<std::size_t> viterbi_decode(const std::vector<std::vector<std::string>>& tags,
                                        const std::vector<std::string>& forms,
                                        const std::vector<std::vector<std::string>>& lemmas, const StatModel& m) {
  const std::size_t n = tags.size();
  if (n == 0) return {};
  for (const auto& t : tags)
    if (t.empty()) throw Error("empty cohort in decoding");

  struct Cell {
    double score = 0;
    std::vector<std::size_t> path;
  };
  // key: (index at i-1 or -1, index at i); the first half is always -1 for bigrams
  using Key = std::pair<long, long>;
  auto better = [](double score, const std::vector<std::size_t>& path, const Cell& cell) {
    return score > cell.score || (score == cell.score && path < cell.path);
  };
  auto history_of = [&](const std::vector<std::size_t>& path, std::size_t upto) {
    std::vector<std::string> prev;
    const std::size_t width = m.order == 3 ? 2 : 1;
    for (std::size_t k = upto >= width ? upto - width : 0; k < upto; ++k) prev.push_back(tags[k][path[k]]);
    return m.history(prev);
  };

  std::map<Key, Cell> layer;
  for (std::size_t r = 0; r < tags[0].size(); ++r) {
    Cell c;
    c.path = {r};
    c.score = 0.0;
    c.score = c.score + std::log(m.transition(history_of(c.path, 0), tags[0][r]));
    c.score = c.score + std::log(m.emission(forms[0], lemmas[0][r], tags[0][r]));
    layer[{-1, static_cast<long>(r)}] = std::move(c);
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::map<Key, Cell> next;
    for (const auto& [key, cell] : layer) {
      const auto hist = history_of(cell.path, i);
      for (std::size_t r = 0; r < tags[i].size(); ++r) {
        double score = cell.score + std::log(m.transition(hist, tags[i][r]));
        score = score + std::log(m.emission(forms[i], lemmas[i][r], tags[i][r]));
        auto path = cell.path;
        path.push_back(r);
        const Key k{m.order == 3 ? key.second : -1, static_cast<long>(r)};
        auto it = next.find(k);
        if (it == next.end()) next.emplace(k, Cell{score, std::move(path)});
        else if (better(score, path, it->second)) it->second = Cell{score, std::move(path)};
      }
    }
    layer = std::move(next);
  }
  const Cell* best = nullptr;
  Cell final_cell;
  for (const auto& [key, cell] : layer) {
    const double score = cell.score + std::log(m.transition(history_of(cell.path, n), kEndTag));
    if (!best || better(score, cell.path, final_cell)) {
      final_cell = Cell{score, cell.path};
      best = &cell;
    }
  }
  return final_cell.path;
}

std::vector<std::size_t> viterbi_decode(const Sentence& s, const StatModel& m, const tagset::TagsetConfig& cfg) {
  const auto tags = sentence_tags(s, m, cfg);
  std::vector<std::string> forms;
  std::vector<std::vector<std::string>> lemmas;
  for (const auto& c : s) {
    forms.push_back(c.surface);
    lemmas.emplace_back();
    for (const auto& r : c.readings) lemmas.back().push_back(r.analysis.lemma);
  }
  return viterbi_decode(tags, forms, lemmas, m);
}

void disambiguate(Sentence& s, const ConstraintGrammar& g, const StatModel& m, const tagset::TagsetConfig& cfg) {
  if (s.empty()) return;
  apply_constraints(s, g);
  const auto chosen = viterbi_decode(s, m, cfg);
  for (std::size_t i = 0; i < s.size(); ++i) {
    Reading keep = std::move(s[i].readings[chosen[i]]);
    s[i].readings.clear();
    s[i].readings.push_back(std::move(keep));
  }
}

}  // namespace euslem::disambiguator
