#include <algorithm>

#include "euslem/error.hpp"
#include "euslem/lexicon.hpp"

namespace euslem::lexicon {

std::size_t MorphNetwork::exit_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.exits.size();
  return n;
}

std::size_t MorphNetwork::reentry_link_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes)
    for (const auto& e : node.exits) n += e.genitive ? 1 : 0;
  return n;
}

namespace {

int child(MorphNetwork& net, int node, SymbolId sym) {
  auto& arcs = net.nodes[static_cast<std::size_t>(node)].arcs;
  auto it = std::lower_bound(arcs.begin(), arcs.end(), sym, [](const Arc& a, SymbolId s) { return a.symbol < s; });
  if (it != arcs.end() && it->symbol == sym) return it->target;
  const int fresh = static_cast<int>(net.nodes.size());
  arcs.insert(it, Arc{sym, fresh});
  net.nodes.emplace_back();
  return fresh;
}

}  // namespace

MorphNetwork compile_network(const Lexicon& lex, std::shared_ptr<const twolevel::CompiledRules> rules,
                             int max_ellipsis_depth) {
  if (max_ellipsis_depth < 0) throw DataError("max ellipsis depth must be >= 0");
  for (const auto& d : validate_lexicon(lex))
    if (d.severity == Diagnostic::Severity::Error) throw DataError("line " + std::to_string(d.line) + ": " + d.message);

  MorphNetwork net;
  net.rules = std::move(rules);
  net.max_ellipsis_depth = max_ellipsis_depth;
  const auto& rs = net.rules->rules();

  for (const auto& sub : lex.sublexicons) {
    net.sublexicon_roots[sub.name] = static_cast<int>(net.nodes.size());
    net.nodes.emplace_back();
  }
  net.root = net.sublexicon_roots.at(lex.root);
  const bool reentry = lex.ellipsis.has_value() && max_ellipsis_depth > 0;
  if (reentry) {
    net.reentry = net.sublexicon_roots.at(lex.ellipsis->target);
    net.elided_category = lex.ellipsis->category;
  } else if (lex.ellipsis) {
    net.elided_category = lex.ellipsis->category;
  }
  if (lex.ellipsis) net.genitive_cases = lex.ellipsis->cases;

  for (const auto& sub : lex.sublexicons) {
    const bool is_root = sub.name == lex.root;
    for (const auto& e : sub.entries) {
      NetEntry ne;
      ne.form = e.form;
      ne.gloss = e.gloss;
      ne.lemma = e.lemma;
      ne.category = e.category;
      ne.subcategory = e.subcategory;
      ne.features = e.features;
      ne.sublexicon = sub.name;
      ne.standard = e.standard;
      ne.stem = is_root;
      for (const auto& sym : split_lexical(e.form)) {
        const auto id = rs.symbols.find(sym);
        if (id < 0 || !rs.is_lexical_symbol(id))
          throw DataError("line " + std::to_string(e.line) + ": symbol '" + sym + "' of '" + e.form +
                          "' has no feasible pair");
        ne.symbols.push_back(id);
      }
      int node = net.sublexicon_roots.at(sub.name);
      for (auto sym : ne.symbols) node = child(net, node, sym);
      Exit x;
      x.entry = static_cast<int>(net.entries.size());
      x.next = e.continuation == kEnd ? -1 : net.sublexicon_roots.at(e.continuation);
      if (reentry) {
        if (auto c = get(e.features, "case"); c && lex.ellipsis->cases.count(std::string(last_component(*c)))) x.genitive = true;
      }
      net.nodes[static_cast<std::size_t>(node)].exits.push_back(x);
      net.entries.push_back(std::move(ne));
    }
  }
  return net;
}

void attach_guesser(MorphNetwork& net, std::span<const GenericLemma> generics,
                    std::span<const std::string> open_categories) {
  const auto& rs = net.rules->rules();
  std::vector<GuesserArc> added;
  for (const auto& g : generics) {
    if (std::find(open_categories.begin(), open_categories.end(), g.category) == open_categories.end())
      throw DataError("line " + std::to_string(g.line) + ": generic lemma category '" + g.category + "' is not open");
    auto root = net.sublexicon_roots.find(g.continuation);
    if (root == net.sublexicon_roots.end())
      throw DataError("line " + std::to_string(g.line) + ": unknown continuation '" + g.continuation + "'");
    GuesserArc arc;
    arc.category = g.category;
    arc.next = root->second;
    for (const auto& item : g.pattern) {
      std::vector<SymbolId> syms;
      if (auto it = rs.sets.find(item.symbol); it != rs.sets.end()) {
        for (auto s : it->second)
          if (rs.is_surface_symbol(s)) syms.push_back(s);
      } else if (auto id = rs.symbols.find(item.symbol); id >= 0 && rs.is_surface_symbol(id)) {
        syms.push_back(id);
      }
      if (syms.empty())
        throw DataError("line " + std::to_string(g.line) + ": pattern item '" + item.symbol + "' matches no surface symbol");
      std::sort(syms.begin(), syms.end());
      syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
      arc.items.push_back(std::move(syms));
      arc.repeats.push_back(item.repeat);
    }
    added.push_back(std::move(arc));
  }
  for (auto& a : added) net.guesser.push_back(std::move(a));
}

}  // namespace euslem::lexicon
