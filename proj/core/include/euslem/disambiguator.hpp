#pragma once

// Constraint rules followed by n-gram decoding over the surviving readings.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/analysis.hpp"
#include "euslem/corpus.hpp"
#include "euslem/tagset.hpp"

namespace euslem::disambiguator {

struct TagPattern {
  std::vector<std::string> atoms;   // categories, subcategories, feature values, k=v, tag labels
  std::vector<std::string> lemmas;  // quoted atoms

  bool matches(const Reading& r) const;
};

struct Condition {
  int offset = 0;
  bool careful = false;
  bool scan = false;
  TagPattern pattern;
};

enum class Action { Select, Remove };

struct Constraint {
  Action action = Action::Remove;
  TagPattern target;
  std::vector<Condition> conditions;
  std::size_t line = 0;
};

struct ConstraintGrammar {
  std::vector<Constraint> rules;
};

ConstraintGrammar parse_constraints(std::string_view text);

/// Atoms a reading offers to patterns.
std::set<std::string> reading_atoms(const Reading& r);

/// Applies rules in order until a full pass changes nothing. A rule never
/// removes the last reading of a cohort.
void apply_constraints(Sentence& sentence, const ConstraintGrammar& g);

inline constexpr std::string_view kStartTag = "<s>";
inline constexpr std::string_view kEndTag = "</s>";

using CountTable = std::map<std::string, std::map<std::string, std::size_t>>;

struct StatModel {
  int order = 2;
  int level = 2;
  std::vector<std::string> params;
  double lambda = 1.0;
  /// Tags that can follow a history; includes the end tag, never the start tag.
  std::vector<std::string> inventory;
  CountTable transitions;   // history -> tag -> count
  CountTable emit_lemma;    // lemma -> tag -> count
  CountTable emit_form;     // word-form -> tag -> count

  /// Rebuilds the derived totals; call after editing the tables by hand.
  void finalize();

  double transition(std::string_view history, std::string_view tag) const;
  double emission(std::string_view form, std::string_view lemma, std::string_view tag) const;
  /// History key for the tags preceding a position (`a` or `a|b`).
  std::string history(std::span<const std::string> previous) const;

 private:
  std::map<std::string, std::size_t, std::less<>> row_totals_;
  std::map<std::string, std::size_t, std::less<>> lemma_tag_totals_;
  std::map<std::string, std::size_t, std::less<>> form_tag_totals_;
};

/// Trains from a corpus with one reading per cohort. `extra_tags` are added to
/// the inventory even if unseen.
StatModel train_model(const corpus::AnnotatedCorpus& gold, int order, int level, std::span<const std::string> params,
                      double lambda, const tagset::TagsetConfig& cfg, std::span<const std::string> extra_tags = {});

void save_model(const StatModel& m, std::ostream& out);
StatModel load_model(std::istream& in);

/// Tag of every reading at the model's level.
std::vector<std::vector<std::string>> sentence_tags(const Sentence& s, const StatModel& m, const tagset::TagsetConfig& cfg);

/// Index of the chosen reading per cohort. Among equally scored paths the one
/// with the lowest index at the earliest differing position wins.
std::vector<std::size_t> viterbi_decode(const Sentence& s, const StatModel& m, const tagset::TagsetConfig& cfg);

/// Same decoding over precomputed tags; `forms` and `lemmas` are per reading.
std::vector<std::size_t> viterbi_decode(const std::vector<std::vector<std::string>>& tags,
                                        const std::vector<std::string>& forms,
                                        const std::vector<std::vector<std::string>>& lemmas, const StatModel& m);

/// Constraints, then decoding; leaves exactly one reading per cohort.
void disambiguate(Sentence& s, const ConstraintGrammar& g, const StatModel& m, const tagset::TagsetConfig& cfg);

}  // namespace euslem::disambiguator
