#pragma once

// Two-level rules: parsing, compilation to deterministic pair recognizers and
// the parallel acceptance test over aligned lexical/surface strings.

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/symbols.hpp"

namespace euslem::twolevel {

struct PairSymbol {
  SymbolId lexical = kNull;
  SymbolId surface = kNull;

  auto operator<=>(const PairSymbol&) const = default;
};

enum class Repeat { ExactlyOne, ZeroOrMore, OneOrMore, Optional };

/// One item of a rule context: a set of feasible pairs plus a repetition marker.
struct ContextItem {
  std::string source;          // as written, for diagnostics
  std::vector<int> pairs;      // sorted indices into RuleSet::alphabet
  Repeat repeat = Repeat::ExactlyOne;
};

struct ContextPattern {
  std::vector<ContextItem> items;
};

enum class RuleOperator {
  ContextRequirement,  // =>
  SurfaceCoercion,     // <=
  DoubleArrow,         // <=>
  Exclusion,           // /<=
};

std::string_view to_string(RuleOperator op);

struct TwoLevelRule {
  std::string name;
  PairSymbol pair;
  RuleOperator op = RuleOperator::DoubleArrow;
  ContextPattern left;
  ContextPattern right;
  bool variant_only = false;
  std::size_t line = 0;
};

/// Parsed rule file. `alphabet` is the feasible-pair list; a pair's index in it
/// is the pair id used by recognizers.
class RuleSet {
 public:
  SymbolTable symbols;
  std::vector<PairSymbol> alphabet;
  /// Parallel to alphabet: pair licensed only when variant analysis is on.
  std::vector<bool> variant_pair;
  std::map<std::string, std::vector<SymbolId>, std::less<>> sets;
  std::vector<TwoLevelRule> rules;
  /// Original rule-file text (kept for network serialization).
  std::string source;

  /// -1 when the pair is not feasible.
  int pair_index(PairSymbol p) const;
  /// Pair ids whose lexical side is `lexical` (NULL gives epenthesis pairs).
  const std::vector<int>& pairs_with_lexical(SymbolId lexical) const;
  bool is_surface_symbol(SymbolId s) const;
  bool is_lexical_symbol(SymbolId s) const;

  /// Rebuilds lookup indices after alphabet edits.
  void reindex();

 private:
  std::vector<std::vector<int>> by_lexical_;
  std::vector<bool> surface_;
  std::vector<bool> lexical_;
  std::vector<int> empty_;
};

/// Parses rule-file text. Throws ParseError (with line/column) on syntax
/// errors, undefined set names, duplicate rule names, and `0:0` pairs.
RuleSet parse_rules(std::string_view text);

/// Returns the feasible-pair alphabet (variant-only pairs included when asked).
std::set<PairSymbol> licensed_pairs(const RuleSet& rules, bool include_variants = true);

/// Deterministic, total automaton over classified pairs.
class PairRecognizer {
 public:
  int start() const noexcept { return 0; }
  int sink() const noexcept { return sink_; }
  int step(int state, int pair) const {
    return table_[static_cast<std::size_t>(state) * class_count_ + static_cast<std::size_t>(class_of_[static_cast<std::size_t>(pair)])];
  }
  bool accepting(int state) const { return accepting_[static_cast<std::size_t>(state)]; }
  /// True while an accepting state is still reachable.
  bool live(int state) const { return live_[static_cast<std::size_t>(state)]; }

  std::size_t state_count() const noexcept { return accepting_.size(); }
  std::size_t class_count() const noexcept { return class_count_; }
  int class_of(int pair) const { return class_of_[static_cast<std::size_t>(pair)]; }
  /// Number of table entries per state; equals class_count() for every state.
  std::size_t transitions_from(int state) const;

  bool accepts(std::span<const int> pairs) const;

 private:
  friend PairRecognizer compile_rule(const TwoLevelRule&, std::span<const PairSymbol>);
  std::vector<int> class_of_;
  std::size_t class_count_ = 0;
  std::vector<int> table_;
  std::vector<bool> accepting_;
  std::vector<bool> live_;
  int sink_ = 0;
};

/// Compiles one rule against a feasible-pair alphabet. Throws DataError when a
/// context can match nothing.
PairRecognizer compile_rule(const TwoLevelRule& rule, std::span<const PairSymbol> alphabet);

/// All rules of a RuleSet compiled once; shared read-only by analyzers.
class CompiledRules {
 public:
  explicit CompiledRules(RuleSet rules);

  const RuleSet& rules() const noexcept { return rules_; }
  const std::vector<PairRecognizer>& recognizers() const noexcept { return recognizers_; }
  bool variant_rule(std::size_t i) const { return rules_.rules[i].variant_only; }

  /// Whether rule `i` participates in the given mode.
  bool active(std::size_t i, bool variants) const { return variants || !rules_.rules[i].variant_only; }

 private:
  RuleSet rules_;
  std::vector<PairRecognizer> recognizers_;
};

enum class Pairing { Accepted, Rejected, NoAlignment };

struct PairingOptions {
  bool variants = false;
  /// Maximum consecutive lexical-NULL insertions.
  int max_null_run = 3;
};

/// Parallel-constraint acceptance test. Searches every NULL-padded alignment
/// of the two symbol strings; Accepted if some alignment passes every active
/// rule, Rejected if alignments exist but none passes, NoAlignment otherwise.
Pairing check_pairing(std::span<const SymbolId> lexical, std::span<const SymbolId> surface,
                      const CompiledRules& rules, const PairingOptions& options = {});

/// Convenience overload on strings (lexical strings accept `{Name}` symbols).
Pairing check_pairing(std::string_view lexical, std::string_view surface, const CompiledRules& rules,
                      const PairingOptions& options = {});

}  // namespace euslem::twolevel
