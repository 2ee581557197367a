#pragma once

// Analysis and generation over a compiled network.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "euslem/analysis.hpp"
#include "euslem/error.hpp"
#include "euslem/lexicon.hpp"

namespace euslem {

struct AnalyzerConfig {
  int max_ellipsis_depth = 2;
  bool allow_variants = false;
  bool allow_guesser = false;
  int max_null_run = 3;
};

/// The word contains a symbol outside the surface alphabet.
class UnanalyzableError : public Error {
 public:
  using Error::Error;
};

/// (stem category, suffix gloss) -> composed category.
using DerivationMap = std::map<std::pair<std::string, std::string>, std::string>;

struct ParadigmReport {
  std::set<std::string> forms;  // empty in count-only mode
  std::size_t total = 0;
  std::size_t closed_count = 0;           // depth-0 forms that cannot take an ellipsis
  std::size_t genitive_bearing_count = 0;  // depth-0 forms ending in a genitive
};

/// One generated paradigm cell: surface form plus the reading that produced it.
struct Inflection {
  std::string form;
  Analysis analysis;
};

class Analyzer {
 public:
  explicit Analyzer(const lexicon::MorphNetwork& net, DerivationMap derivations = {});

  /// Every reading of `word`, falling back from standard analysis to variants
  /// to the guesser. Throws Error on empty input and UnanalyzableError when a
  /// symbol is outside the surface alphabet.
  std::vector<Analysis> analyze(std::string_view word, const AnalyzerConfig& cfg = {}) const;

  /// Guesser readings only.
  std::vector<Analysis> guess(std::string_view word, const AnalyzerConfig& cfg = {}) const;

  /// Surface forms of `lemma` with exactly `ellipsis_depth` re-entries whose
  /// features include `spec`. Long value names (inessive, singular...) are accepted.
  std::vector<std::string> generate(std::string_view lemma, const FeatureSet& spec, int ellipsis_depth = 0) const;

  /// Distinct inflected forms with at most `depth` re-entries.
  ParadigmReport enumerate_inflections(std::string_view lemma, int depth, bool count_only = false) const;

  /// Every inflected paradigm cell with at most `depth` re-entries.
  std::vector<Inflection> inflections(std::string_view lemma, int depth) const;

  bool knows_lemma(std::string_view lemma) const;
  std::vector<std::string> lemmas() const;

  const lexicon::MorphNetwork& network() const noexcept { return net_; }

 private:
  const lexicon::MorphNetwork& net_;
  DerivationMap derivations_;
};

/// Normalizes long feature names and values to the fixture's short codes.
FeatureSet normalize_spec(const FeatureSet& spec);

/// Multiword lemmas, one per line, members separated by spaces. `#` starts a comment.
std::vector<std::vector<std::string>> parse_compounds(std::string_view text);

/// Longest-leftmost matching of multiword lemmas; each member gains indexed
/// copies of its readings whose lemma matches. Only the last member may be
/// inflected; earlier members match bare-stem readings.
void mark_compounds(Sentence& sentence, const std::vector<std::vector<std::string>>& compounds);

}  // namespace euslem
