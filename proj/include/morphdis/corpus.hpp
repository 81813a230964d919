#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "morphdis/featstruct.hpp"
#include "morphdis/unknown.hpp"

namespace morphdis {

enum class TokenOrigin { Analyzer, Guesser, Collocation };

// One candidate analysis of a token. `originals` carries the full parses a
// projected parse stands for; it is empty when `fs` is itself original.
struct Parse {
  FeatureStructure fs;
  std::vector<FeatureStructure> originals;

  Parse() = default;
  explicit Parse(FeatureStructure f) : fs(std::move(f)) {}
};

struct Token {
  std::string surface;
  TokenOrigin origin = TokenOrigin::Analyzer;
  std::vector<Parse> parses;  // non-empty, pairwise structurally distinct

  bool unambiguous() const { return parses.size() == 1; }
  bool ambiguous() const { return parses.size() > 1; }
};

struct Sentence {
  std::vector<Token> tokens;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::string provenance;

  long token_count() const;
  long parse_count() const;
  double ambiguity() const;  // parses per token
};

struct DecodeOptions {
  // When set, tokens with no parses are run through the suffix guesser.
  const SuffixLexicon* guesser = nullptr;
  // Warnings (e.g. tokens left with a CAT UNKNOWN parse) are appended here.
  std::vector<std::string>* warnings = nullptr;
};

// Corpus file grammar (UTF-8): one token per line as
//   surface TAB linear-parse (TAB linear-parse)*
// a blank line ends a sentence; '#' starts a comment (whole line, or the
// rest of a line when a field starts with '#').
Corpus decode_corpus(std::istream& in, const std::string& name, const DecodeOptions& opts = {});
Corpus decode_corpus_text(std::string_view text, const std::string& name = "<string>",
                          const DecodeOptions& opts = {});
Corpus load_corpus(const std::string& path, const DecodeOptions& opts = {});
std::string encode_corpus(const Corpus& c);

// Two-token collocation pattern: positional constraints, a predicate over
// the matched parses' roots (and senses), and an output template. A '*'
// at the start of the template splices in the first matched parse.
struct CollocationPattern {
  enum class Predicate { None, EqualRoot, EqualRootOppositeSense };

  FeatureConstraint first;
  FeatureConstraint second;
  Predicate predicate = Predicate::None;
  bool splice_first = true;
  std::vector<LinearEntry> extra;
};

// Pattern file: one pattern per line,
//   constraint TAB constraint TAB predicate-name TAB output-template
std::vector<CollocationPattern> decode_patterns(std::string_view text,
                                                const std::string& file = {});
std::vector<CollocationPattern> load_patterns(const std::string& path);

// Greedy left-to-right, non-overlapping grouping; file order is priority.
Sentence group_collocations(const Sentence& s, const std::vector<CollocationPattern>& patterns);
void group_collocations(Corpus& c, const std::vector<CollocationPattern>& patterns);

// Projects every parse with t, collapsing parses whose projections are
// structurally equal into one Parse carrying the originals.
Corpus project_corpus(const Corpus& c, const ProjectionTemplate& t);
// Replaces each projected parse by the original parses it stands for.
Corpus restore_originals(const Corpus& c);

}  // namespace morphdis
