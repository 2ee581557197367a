#pragma once

// Tokenization, cohort streams, ambiguity statistics and evaluation.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/analysis.hpp"
#include "euslem/tagset.hpp"

namespace euslem::corpus {

/// Whitespace tokens; punctuation is split off, `.?!` also ends the sentence.
std::vector<std::vector<std::string>> tokenize(std::string_view text);

struct AnnotatedCorpus {
  std::vector<Sentence> sentences;
  int level = 4;
  std::vector<std::string> params;

  std::size_t token_count() const;
  bool operator==(const AnnotatedCorpus& o) const { return sentences == o.sentences; }
};

enum class WriteMode {
  Full,    // canonical reading plus its tag, if any
  Tagged,  // `"lemma" LABEL`
};

/// Throws ParseError with the offending line.
AnnotatedCorpus read_cohorts(std::istream& in);
AnnotatedCorpus read_cohorts_text(std::string_view text);
void write_cohorts(const AnnotatedCorpus& corpus, std::ostream& out, WriteMode mode = WriteMode::Full);
void write_sentence(const Sentence& s, std::ostream& out, WriteMode mode = WriteMode::Full);

struct AmbiguityStats {
  std::size_t tokens = 0;
  std::size_t ambiguous_tokens = 0;
  std::size_t total_readings = 0;
  double ambiguity_rate = 0;
  double readings_per_token = 0;
  // same figures counting distinct categories only
  std::size_t category_ambiguous_tokens = 0;
  std::size_t category_readings = 0;
  double category_ambiguity_rate = 0;
  double categories_per_token = 0;
};

/// Throws Error on an empty corpus.
AmbiguityStats ambiguity_stats(const AnnotatedCorpus& corpus);

struct TagScore {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  double precision() const;
  double recall() const;
};

struct EvalReport {
  std::size_t tokens = 0;
  std::size_t correct = 0;
  double accuracy = 0;
  std::map<std::string, TagScore> per_tag;
};

/// Label of a reading at `level`: projected when the analysis is complete,
/// otherwise the stored tag.
std::string reading_label(const Reading& r, int level, std::span<const std::string> params,
                          const tagset::TagsetConfig& cfg);

/// Compares the first reading of each cohort. Throws Error at the first
/// divergent token.
EvalReport evaluate(const AnnotatedCorpus& gold, const AnnotatedCorpus& system, int level,
                    std::span<const std::string> params, const tagset::TagsetConfig& cfg);

}  // namespace euslem::corpus
