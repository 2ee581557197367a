#pragma once

// Lexicon files, continuation-class morphotactics and the compiled trie
// network the analyzer walks.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/features.hpp"
#include "euslem/twolevel.hpp"

namespace euslem::lexicon {

/// Continuation name that ends a word.
inline constexpr std::string_view kEnd = "#";

struct LexEntry {
  std::string form;          // lexical form as written; "0" is the empty form
  std::string gloss;
  std::string lemma;         // set for root (stem) entries only
  std::string category;      // empty for pure affixes
  std::string subcategory;
  FeatureSet features;
  std::string continuation;  // sublexicon name or "#"
  bool standard = true;
  std::size_t line = 0;

  bool zero_length() const;
};

struct Sublexicon {
  std::string name;
  std::vector<LexEntry> entries;
  std::size_t line = 0;
};

/// Pattern item of a generic lemma, resolved against the rule sets at attach time.
struct PatternItem {
  std::string symbol;  // set name or single symbol
  twolevel::Repeat repeat = twolevel::Repeat::ExactlyOne;
};

struct GenericLemma {
  std::string category;
  std::vector<PatternItem> pattern;
  std::string continuation;
  std::size_t line = 0;
};

/// Genitive re-entry declaration (`ELLIPSIS <Sublexicon> CASES=.. [CAT=..] ;`).
struct EllipsisSpec {
  std::string target;
  std::set<std::string> cases;
  std::string category = "NOUN";
};

struct Lexicon {
  std::vector<Sublexicon> sublexicons;
  std::string root;
  std::optional<EllipsisSpec> ellipsis;
  std::vector<GenericLemma> generics;

  const Sublexicon* find(std::string_view name) const;
};

/// Parses lexicon text. When `categories` is nonempty every CAT= value must be
/// one of them.
Lexicon parse_lexicon(std::string_view text, std::span<const std::string> categories = {});

struct Diagnostic {
  enum class Severity { Warning, Error };
  Severity severity = Severity::Warning;
  std::string message;
  std::size_t line = 0;
};

/// Unreachable sublexicons and shadowed variant entries (warnings), cycles of
/// zero-length continuations (errors).
std::vector<Diagnostic> validate_lexicon(const Lexicon& lex);

// ---------------------------------------------------------------------------

struct Arc {
  SymbolId symbol = kNull;
  int target = -1;
};

/// An entry ending at a node. `next` is the root node of the continuation
/// sublexicon or -1 for the end marker.
struct Exit {
  int entry = -1;
  int next = -1;
  bool genitive = false;  // carries an ellipsis re-entry link
};

struct Node {
  std::vector<Arc> arcs;  // sorted by symbol
  std::vector<Exit> exits;
};

/// Flattened entry as stored in the network.
struct NetEntry {
  std::vector<SymbolId> symbols;
  std::string form;
  std::string gloss;
  std::string lemma;
  std::string category;
  std::string subcategory;
  FeatureSet features;
  std::string sublexicon;
  bool standard = true;
  bool stem = false;
};

/// Generic lemma compiled for the guesser: each item is a set of surface symbols.
struct GuesserArc {
  std::string category;
  std::vector<std::vector<SymbolId>> items;  // sorted symbol sets
  std::vector<twolevel::Repeat> repeats;
  int next = -1;
};

struct MorphNetwork {
  std::shared_ptr<const twolevel::CompiledRules> rules;
  std::vector<Node> nodes;
  std::vector<NetEntry> entries;
  int root = 0;
  /// Root node of the ellipsis target, -1 when re-entry is off.
  int reentry = -1;
  std::string elided_category = "NOUN";
  std::set<std::string> genitive_cases;
  int max_ellipsis_depth = 0;
  std::vector<GuesserArc> guesser;
  std::map<std::string, int, std::less<>> sublexicon_roots;

  std::size_t exit_count() const;
  std::size_t reentry_link_count() const;
};

/// Compiles the lexicon against the rules' symbol table. Throws DataError when
/// a lexical symbol has no feasible pair or validation reports an error.
MorphNetwork compile_network(const Lexicon& lex, std::shared_ptr<const twolevel::CompiledRules> rules,
                             int max_ellipsis_depth);

/// Adds guesser arcs. Throws DataError for a generic whose category is not open.
void attach_guesser(MorphNetwork& net, std::span<const GenericLemma> generics,
                    std::span<const std::string> open_categories);

}  // namespace euslem::lexicon
