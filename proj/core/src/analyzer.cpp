#include "euslem/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace euslem {

using lexicon::MorphNetwork;
using twolevel::Repeat;

namespace {

struct Step {
  int entry = -1;
  int guesser = -1;
  bool reentry = false;
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class Mode { Analyze, Generate };

/// Depth-first walk of network arcs in lockstep with the rule automata.
class Walker {
 public:
  using Sink = std::function<void(const Walker&)>;

  Walker(const MorphNetwork& net, Mode mode, bool variants, int max_null_run, int budget)
      : net_(net), rules_(*net.rules), rs_(rules_.rules()), mode_(mode), variants_(variants), max_null_run_(max_null_run),
        budget_(budget) {
    const auto& recs = rules_.recognizers();
    for (std::size_t r = 0; r < recs.size(); ++r)
      if (rules_.active(r, variants)) active_.push_back(r);
    width_ = active_.size();
    states_.assign(width_ * 64, 0);
  }

  void set_word(std::vector<SymbolId> word) { word_ = std::move(word); }
  void set_lemma(std::string_view lemma) { lemma_ = std::string(lemma); }
  void skip_derivations() { skip_derivations_ = true; }
  void set_sink(Sink s) { sink_ = std::move(s); }

  void run_lexicon() {
    reset();
    walk(net_.root, 0, 0, 0, budget_);
  }

  void run_guesser() {
    for (std::size_t g = 0; g < net_.guesser.size(); ++g) guess_from(static_cast<int>(g));
  }

  // --- accessors for sinks
  const std::vector<Step>& path() const { return path_; }
  std::size_t reentries() const {
    return static_cast<std::size_t>(std::count_if(path_.begin(), path_.end(), [](const Step& s) { return s.reentry; }));
  }
  bool standard() const {
    if (variant_pairs_ > 0) return false;
    for (const auto& s : path_)
      if (s.entry >= 0 && !net_.entries[static_cast<std::size_t>(s.entry)].standard) return false;
    return true;
  }
  std::string surface() const {
    std::string out;
    for (auto id : surface_symbols()) out += rs_.symbols.name(id);
    return out;
  }
  std::string surface_range(std::size_t b, std::size_t e) const {
    std::string out;
    const auto& syms = surface_symbols();
    for (std::size_t i = b; i < e && i < syms.size(); ++i) out += rs_.symbols.name(syms[i]);
    return out;
  }
  /// Case value of the last case-bearing entry before the first re-entry.
  std::optional<std::string> top_case() const {
    std::optional<std::string> out;
    for (const auto& s : path_) {
      if (s.reentry) break;
      if (s.entry < 0) continue;
      if (auto c = get(net_.entries[static_cast<std::size_t>(s.entry)].features, "case")) out = std::string(last_component(*c));
    }
    return out;
  }
  /// Case value of the last case-bearing entry on the whole path.
  std::optional<std::string> last_case() const {
    std::optional<std::string> out;
    for (const auto& s : path_) {
      if (s.entry < 0) continue;
      if (auto c = get(net_.entries[static_cast<std::size_t>(s.entry)].features, "case")) out = std::string(last_component(*c));
    }
    return out;
  }

  Analysis build(const DerivationMap& derivations, Source source) const {
    Analysis a;
    a.source = source;
    a.standard = standard();
    if (!a.standard && a.source == Source::Lexicon) a.source = Source::Variant;
    FeatureSet* target = &a.features;
    const std::string cat_key(kCategoryKey), sub_key(kSubcategoryKey);
    for (const auto& s : path_) {
      if (s.reentry) {
        a.ellipsis.push_back({net_.elided_category, {}});
        target = &a.ellipsis.back().inflection;
        continue;
      }
      if (s.guesser >= 0) {
        a.lemma = surface_range(s.begin, s.end);
        a.features[cat_key] = net_.guesser[static_cast<std::size_t>(s.guesser)].category;
        a.segments.push_back({a.lemma, s.begin, s.end, "", {}, SegmentRole::Stem});
        continue;
      }
      const auto& e = net_.entries[static_cast<std::size_t>(s.entry)];
      SegmentRole role = SegmentRole::Boundary;
      if (e.stem) {
        role = SegmentRole::Stem;
        a.lemma = e.lemma;
        a.features[cat_key] = e.category;
        if (!e.subcategory.empty()) a.features[sub_key] = e.subcategory;
      } else if (!e.category.empty()) {
        role = SegmentRole::Derivation;
        if (a.ellipsis.empty()) {
          if (auto it = derivations.find({a.category(), e.gloss}); it != derivations.end()) a.derived_category = it->second;
          a.features[cat_key] = e.category;
          if (e.subcategory.empty()) a.features.erase(sub_key);
          else a.features[sub_key] = e.subcategory;
        } else {
          a.ellipsis.back().category = e.category;
        }
      } else if (!e.features.empty() || !e.gloss.empty()) {
        role = SegmentRole::Inflection;
      }
      merge_features(*target, e.features);
      if (!e.symbols.empty() || role != SegmentRole::Boundary) a.segments.push_back({e.form, s.begin, s.end, e.gloss, e.features, role});
    }
    return a;
  }

 private:
  const std::vector<SymbolId>& surface_symbols() const { return mode_ == Mode::Analyze ? word_ : built_; }
  std::size_t pos() const { return mode_ == Mode::Analyze ? pos_ : built_.size(); }

  void reset() {
    path_.clear();
    built_.clear();
    pos_ = 0;
    variant_pairs_ = 0;
    std::fill(states_.begin(), states_.begin() + static_cast<std::ptrdiff_t>(width_), 0);
  }

  /// Steps every active recognizer from `frame` into `frame + 1`; false when one dies.
  bool advance(std::size_t frame, int pair) {
    if ((frame + 2) * width_ > states_.size()) states_.resize(states_.size() * 2 + width_ * 2);
    const auto& recs = rules_.recognizers();
    for (std::size_t k = 0; k < width_; ++k) {
      const auto& rec = recs[active_[k]];
      const int next = rec.step(states_[frame * width_ + k], pair);
      if (!rec.live(next)) return false;
      states_[(frame + 1) * width_ + k] = next;
    }
    return true;
  }

  bool accepting(std::size_t frame) const {
    const auto& recs = rules_.recognizers();
    for (std::size_t k = 0; k < width_; ++k)
      if (!recs[active_[k]].accepting(states_[frame * width_ + k])) return false;
    return true;
  }

  bool usable(int pair) const { return variants_ || !rs_.variant_pair[static_cast<std::size_t>(pair)]; }

  void consume(SymbolId surface) {
    if (surface == kNull) return;
    if (mode_ == Mode::Analyze) ++pos_;
    else built_.push_back(surface);
  }
  void unconsume(SymbolId surface) {
    if (surface == kNull) return;
    if (mode_ == Mode::Analyze) --pos_;
    else built_.pop_back();
  }
  bool fits(SymbolId surface) const {
    if (surface == kNull || mode_ == Mode::Generate) return true;
    return pos_ < word_.size() && word_[pos_] == surface;
  }

  void finish(std::size_t frame) {
    if (mode_ == Mode::Analyze && pos_ != word_.size()) return;
    if (!accepting(frame)) return;
    sink_(*this);
  }

  void walk(int node_id, std::size_t seg_start, int null_run, std::size_t frame, int budget) {
    const auto& node = net_.nodes[static_cast<std::size_t>(node_id)];
    for (const auto& x : node.exits) {
      const auto& e = net_.entries[static_cast<std::size_t>(x.entry)];
      if (!variants_ && !e.standard) continue;
      if (e.stem && lemma_ && e.lemma != *lemma_) continue;
      if (skip_derivations_ && !e.stem && !e.category.empty()) continue;
      path_.push_back({x.entry, -1, false, seg_start, pos()});
      if (x.next < 0) finish(frame);
      else walk(x.next, pos(), null_run, frame, budget);
      if (x.genitive && budget > 0 && net_.reentry >= 0) {
        path_.push_back({-1, -1, true, pos(), pos()});
        walk(net_.reentry, pos(), null_run, frame, budget - 1);
        path_.pop_back();
      }
      path_.pop_back();
    }
    for (const auto& arc : node.arcs) {
      for (int pair : rs_.pairs_with_lexical(arc.symbol)) {
        if (!usable(pair)) continue;
        const auto surface = rs_.alphabet[static_cast<std::size_t>(pair)].surface;
        if (!fits(surface) || !advance(frame, pair)) continue;
        const bool variant = rs_.variant_pair[static_cast<std::size_t>(pair)];
        variant_pairs_ += variant;
        consume(surface);
        walk(arc.target, seg_start, 0, frame + 1, budget);
        unconsume(surface);
        variant_pairs_ -= variant;
      }
    }
    if (null_run < max_null_run_) {
      for (int pair : rs_.pairs_with_lexical(kNull)) {
        if (!usable(pair)) continue;
        const auto surface = rs_.alphabet[static_cast<std::size_t>(pair)].surface;
        if (!fits(surface) || !advance(frame, pair)) continue;
        const bool variant = rs_.variant_pair[static_cast<std::size_t>(pair)];
        variant_pairs_ += variant;
        consume(surface);
        walk(node_id, seg_start, null_run + 1, frame + 1, budget);
        unconsume(surface);
        variant_pairs_ -= variant;
      }
    }
  }

  void guess_from(int g) {
    const auto& arc = net_.guesser[static_cast<std::size_t>(g)];
    // position set over pattern items; bit k = before item k
    const std::size_t n_items = arc.items.size();
    auto closure = [&](std::vector<char> s) {
      for (std::size_t k = 0; k < n_items; ++k)
        if (s[k] && (arc.repeats[k] == Repeat::Optional || arc.repeats[k] == Repeat::ZeroOrMore)) s[k + 1] = 1;
      return s;
    };
    auto step = [&](const std::vector<char>& s, SymbolId sym) {
      std::vector<char> t(n_items + 1, 0);
      for (std::size_t k = 0; k < n_items; ++k) {
        if (!s[k] || !std::binary_search(arc.items[k].begin(), arc.items[k].end(), sym)) continue;
        if (arc.repeats[k] == Repeat::ZeroOrMore) t[k] = 1;
        else if (arc.repeats[k] == Repeat::OneOrMore) t[k] = t[k + 1] = 1;
        else t[k + 1] = 1;
      }
      return closure(t);
    };
    reset();
    std::vector<char> state(n_items + 1, 0);
    state[0] = 1;
    state = closure(state);
    for (std::size_t k = 0; k < word_.size(); ++k) {
      state = step(state, word_[k]);
      if (std::none_of(state.begin(), state.end(), [](char c) { return c != 0; })) return;
      const int pair = rs_.pair_index({word_[k], word_[k]});
      if (pair < 0 || !usable(pair) || !advance(k, pair)) return;
      pos_ = k + 1;
      if (state[n_items]) {
        path_.push_back({-1, g, false, 0, pos_});
        walk(arc.next, pos_, 0, k + 1, budget_);
        path_.pop_back();
      }
    }
  }

  const MorphNetwork& net_;
  const twolevel::CompiledRules& rules_;
  const twolevel::RuleSet& rs_;
  Mode mode_;
  bool variants_;
  int max_null_run_;
  int budget_;
  std::vector<std::size_t> active_;
  std::size_t width_ = 0;
  std::vector<int> states_;
  std::vector<SymbolId> word_;
  std::vector<SymbolId> built_;
  std::size_t pos_ = 0;
  int variant_pairs_ = 0;
  std::vector<Step> path_;
  std::optional<std::string> lemma_;
  bool skip_derivations_ = false;
  Sink sink_;
};

std::vector<SymbolId> surface_symbols(const twolevel::RuleSet& rs, std::string_view word) {
  std::vector<SymbolId> out;
  for (const auto& ch : utf8_split(word)) {
    const auto id = rs.symbols.find(ch);
    if (id < 0 || !rs.is_surface_symbol(id)) throw UnanalyzableError("symbol '" + ch + "' is outside the surface alphabet");
    out.push_back(id);
  }
  return out;
}

void sort_unique(std::vector<Analysis>& as) {
  std::vector<std::pair<std::string, std::size_t>> keyed;
  std::vector<std::string> lex;
  keyed.reserve(as.size());
  for (std::size_t i = 0; i < as.size(); ++i) keyed.emplace_back(render_analysis(as[i]), i);
  for (const auto& a : as) lex.push_back(a.lexical());
  std::sort(keyed.begin(), keyed.end(), [&](const auto& x, const auto& y) {
    const auto& a = as[x.second];
    const auto& b = as[y.second];
    if (lex[x.second] != lex[y.second]) return lex[x.second] < lex[y.second];
    if (a.features != b.features) return a.features < b.features;
    return x.first < y.first;
  });
  std::vector<Analysis> out;
  const std::string* prev = nullptr;
  for (const auto& k : keyed) {
    if (prev && *prev == k.first) continue;
    out.push_back(std::move(as[k.second]));
    prev = &k.first;
  }
  as = std::move(out);
}

int effective_budget(const MorphNetwork& net, int requested) {
  if (net.reentry < 0) return 0;
  return std::max(0, std::min(requested, net.max_ellipsis_depth));
}

}  // namespace

Analyzer::Analyzer(const MorphNetwork& net, DerivationMap derivations) : net_(net), derivations_(std::move(derivations)) {}

std::vector<Analysis> Analyzer::analyze(std::string_view word, const AnalyzerConfig& cfg) const {
  if (word.empty()) throw Error("empty input");
  std::string w(word);
  const bool cap = lowercase_first(w);
  const auto& rs = net_.rules->rules();
  auto symbols = surface_symbols(rs, w);
  const int budget = effective_budget(net_, cfg.max_ellipsis_depth);

  std::vector<Analysis> out;
  auto run = [&](bool variants) {
    Walker walker(net_, Mode::Analyze, variants, cfg.max_null_run, budget);
    walker.set_word(symbols);
    walker.set_sink([&](const Walker& wk) { out.push_back(wk.build(derivations_, Source::Lexicon)); });
    walker.run_lexicon();
  };
  run(false);
  if (out.empty() && cfg.allow_variants) run(true);
  if (out.empty() && cfg.allow_guesser) out = guess(w, cfg);
  if (cap)
    for (auto& a : out) a.features["CAP"] = "yes";
  sort_unique(out);
  return out;
}

std::vector<Analysis> Analyzer::guess(std::string_view word, const AnalyzerConfig& cfg) const {
  if (word.empty()) throw Error("empty input");
  const auto symbols = surface_symbols(net_.rules->rules(), word);
  std::vector<Analysis> out;
  Walker walker(net_, Mode::Analyze, false, cfg.max_null_run, effective_budget(net_, cfg.max_ellipsis_depth));
  walker.set_word(symbols);
  walker.set_sink([&](const Walker& wk) { out.push_back(wk.build(derivations_, Source::Guesser)); });
  walker.run_guesser();
  sort_unique(out);
  return out;
}

bool Analyzer::knows_lemma(std::string_view lemma) const {
  return std::any_of(net_.entries.begin(), net_.entries.end(), [&](const auto& e) { return e.stem && e.lemma == lemma; });
}

std::vector<std::string> Analyzer::lemmas() const {
  std::set<std::string> out;
  for (const auto& e : net_.entries)
    if (e.stem && e.standard) out.insert(e.lemma);
  return {out.begin(), out.end()};
}

std::vector<std::string> Analyzer::generate(std::string_view lemma, const FeatureSet& spec, int ellipsis_depth) const {
  if (!knows_lemma(lemma)) throw DataError("unknown lemma '" + std::string(lemma) + "'");
  if (ellipsis_depth < 0 || ellipsis_depth > effective_budget(net_, ellipsis_depth))
    throw DataError("ellipsis depth " + std::to_string(ellipsis_depth) + " exceeds the network's");
  const auto want = normalize_spec(spec);
  std::set<std::string> forms;
  Walker walker(net_, Mode::Generate, false, 3, ellipsis_depth);
  walker.set_lemma(lemma);
  walker.set_sink([&](const Walker& wk) {
    if (wk.reentries() != static_cast<std::size_t>(ellipsis_depth)) return;
    const auto a = wk.build(derivations_, Source::Lexicon);
    if (includes(a.final_features(), want)) forms.insert(wk.surface());
  });
  walker.run_lexicon();
  return {forms.begin(), forms.end()};
}

ParadigmReport Analyzer::enumerate_inflections(std::string_view lemma, int depth, bool count_only) const {
  if (!knows_lemma(lemma)) throw DataError("unknown lemma '" + std::string(lemma) + "'");
  if (depth < 0 || depth > effective_budget(net_, depth))
    throw DataError("depth " + std::to_string(depth) + " exceeds the network's ellipsis depth");
  std::unordered_set<std::string> all, depth0, genitive0;
  Walker walker(net_, Mode::Generate, false, 3, depth);
  walker.set_lemma(lemma);
  walker.skip_derivations();
  walker.set_sink([&](const Walker& wk) {
    if (!wk.top_case()) return;
    auto form = wk.surface();
    if (wk.reentries() == 0) {
      depth0.insert(form);
      if (net_.genitive_cases.count(*wk.last_case())) genitive0.insert(form);
    }
    all.insert(std::move(form));
  });
  walker.run_lexicon();
  ParadigmReport report;
  report.total = all.size();
  report.genitive_bearing_count = genitive0.size();
  report.closed_count = 0;
  for (const auto& f : depth0) report.closed_count += genitive0.count(f) ? 0 : 1;
  if (!count_only) report.forms.insert(all.begin(), all.end());
  return report;
}

std::vector<Inflection> Analyzer::inflections(std::string_view lemma, int depth) const {
  if (!knows_lemma(lemma)) throw DataError("unknown lemma '" + std::string(lemma) + "'");
  if (depth < 0 || depth > effective_budget(net_, depth))
    throw DataError("depth " + std::to_string(depth) + " exceeds the network's ellipsis depth");
  std::vector<Inflection> out;
  Walker walker(net_, Mode::Generate, false, 3, depth);
  walker.set_lemma(lemma);
  walker.skip_derivations();
  walker.set_sink([&](const Walker& wk) {
    if (!wk.top_case()) return;
    out.push_back({wk.surface(), wk.build(derivations_, Source::Lexicon)});
  });
  walker.run_lexicon();
  return out;
}

// ---------------------------------------------------------------------------

FeatureSet normalize_spec(const FeatureSet& spec) {
  static const std::map<std::string, std::string> keys = {
      {"determination", "det"}, {"determiner", "det"}, {"cat", "CAT"}, {"category", "CAT"}, {"sub", "SUB"}};
  static const std::map<std::string, std::string> values = {
      {"nominative", "NOM"}, {"absolutive", "NOM"},   {"ergative", "ERG"},    {"dative", "DAT"},
      {"instrumental", "INS"}, {"comitative", "COM"}, {"benefactive", "BEN"}, {"motivative", "MOT"},
      {"inessive", "INE"},   {"ablative", "ABL"},     {"allative", "ALL"},    {"terminative", "TER"},
      {"directional", "DIR"}, {"prolative", "PRO"},   {"partitive", "PAR"},   {"genitive", "GEN"},
      {"locative-genitive", "GEL"}, {"singular", "SG"}, {"plural", "PL"},     {"proximal", "PROX"},
      {"indefinite", "no"}};
  FeatureSet out;
  for (const auto& [k, v] : spec) {
    std::string lk = k, lv = v;
    std::transform(lk.begin(), lk.end(), lk.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::transform(lv.begin(), lv.end(), lv.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto ki = keys.find(lk);
    auto vi = values.find(lv);
    out[ki != keys.end() ? ki->second : k] = vi != values.end() ? vi->second : v;
  }
  return out;
}

std::vector<std::vector<std::string>> parse_compounds(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> members;
    for (std::string w; words >> w;) members.push_back(w);
    if (!members.empty()) out.push_back(std::move(members));
  }
  return out;
}

void mark_compounds(Sentence& sentence, const std::vector<std::vector<std::string>>& compounds) {
  // members before the last must be uninflected stems
  auto fits = [](const Reading& r, const std::string& lemma, bool last) {
    if (r.analysis.compound || r.analysis.lemma != lemma) return false;
    return last || std::none_of(r.analysis.segments.begin(), r.analysis.segments.end(),
                                [](const MorphemeSegment& m) { return m.role != SegmentRole::Stem; });
  };
  auto has_lemma = [&](const Cohort& c, const std::string& lemma, bool last) {
    return std::any_of(c.readings.begin(), c.readings.end(), [&](const Reading& r) { return fits(r, lemma, last); });
  };
  std::size_t i = 0;
  while (i < sentence.size()) {
    const std::vector<std::string>* best = nullptr;
    for (const auto& c : compounds) {
      if (c.empty() || i + c.size() > sentence.size()) continue;
      if (best && c.size() <= best->size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < c.size() && ok; ++k) ok = has_lemma(sentence[i + k], c[k], k + 1 == c.size());
      if (ok) best = &c;
    }
    if (!best) {
      ++i;
      continue;
    }
    const int n = static_cast<int>(best->size());
    for (int k = 0; k < n; ++k) {
      auto& cohort = sentence[i + static_cast<std::size_t>(k)];
      const std::size_t original = cohort.readings.size();
      for (std::size_t r = 0; r < original; ++r) {
        if (!fits(cohort.readings[r], (*best)[static_cast<std::size_t>(k)], k + 1 == n)) continue;
        Reading copy = cohort.readings[r];
        copy.analysis.compound = CompoundIndex{k + 1, n};
        copy.tag.reset();
        cohort.readings.push_back(std::move(copy));
      }
    }
    i += best->size();
  }
}

}  // namespace euslem
