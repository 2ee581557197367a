#pragma once

// Readings, cohorts and the canonical one-line rendering of an analysis.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "euslem/features.hpp"

namespace euslem {

enum class SegmentRole { Stem, Inflection, Derivation, Boundary };
enum class Source { Lexicon, Variant, Guesser };

std::string_view to_string(Source s);

struct MorphemeSegment {
  std::string lexical;
  std::size_t begin = 0;  // surface span, in code points
  std::size_t end = 0;
  std::string gloss;
  FeatureSet features;
  SegmentRole role = SegmentRole::Stem;

  bool operator==(const MorphemeSegment&) const = default;
};

struct EllipsisSlot {
  std::string category = "NOUN";
  FeatureSet inflection;

  bool operator==(const EllipsisSlot&) const = default;
};

struct CompoundIndex {
  int position = 1;
  int length = 1;

  bool operator==(const CompoundIndex&) const = default;
};

/// Feature keys holding category and subcategory inside Analysis::features.
inline constexpr std::string_view kCategoryKey = "CAT";
inline constexpr std::string_view kSubcategoryKey = "SUB";

struct Analysis {
  std::string lemma;
  std::vector<MorphemeSegment> segments;
  FeatureSet features;
  std::vector<EllipsisSlot> ellipsis;  // outermost last
  std::optional<CompoundIndex> compound;
  std::optional<std::string> derived_category;
  Source source = Source::Lexicon;
  bool standard = true;

  std::string category() const;
  std::string subcategory() const;
  /// Concatenated lexical forms of the segments.
  std::string lexical() const;
  /// Features with the outermost ellipsis slot's inflection laid over them.
  FeatureSet final_features() const;

  bool operator==(const Analysis&) const = default;
};

struct Tag {
  int level = 0;  // 0 when read back from a tagged stream
  std::string label;
  std::vector<std::string> params;

  bool operator==(const Tag&) const = default;
};

struct Reading {
  Analysis analysis;
  std::optional<Tag> tag;

  bool operator==(const Reading&) const = default;
};

struct Cohort {
  std::string surface;
  std::vector<Reading> readings;

  bool operator==(const Cohort&) const = default;
};

using Sentence = std::vector<Cohort>;

/// Canonical rendering: `"lemma" CAT [SUB=..] [DER=..] k=v.. [ELL=..].. [CMP=i/n] SRC=.. [NONSTD] [SEG=..]`.
std::string render_analysis(const Analysis& a);

/// Inverse of render_analysis. Throws Error on malformed input.
Analysis parse_analysis(std::string_view text);

std::string percent_encode(std::string_view s);
std::string percent_decode(std::string_view s);

/// Analysis for a token nothing else could analyze: category guessed from its shape.
Analysis fallback_analysis(std::string_view token);

}  // namespace euslem
