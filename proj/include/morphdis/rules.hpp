#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morphdis/corpus.hpp"
#include "morphdis/featstruct.hpp"

namespace morphdis {

enum class RuleAction { Choose, Delete };
enum class RuleSource { Hand, Learned };

// A context-sensitive disambiguation rule. An absent context position is
// unconstrained and unused; at least one position must be present. The
// canonical shapes rank 1..4 by decreasing specificity:
//   1: (llc,lc -- rc,rrc)   2: (llc,lc --), (-- rc,rrc)
//   3: (lc -- rc)           4: (lc --), (-- rc)
// Hand-crafted rules may constrain other combinations (a two-deep side
// ranks 2, a one-each-side context 3, anything else 4).
struct Rule {
  std::optional<FeatureConstraint> llc, lc, rc, rrc;
  RuleAction action = RuleAction::Choose;
  FeatureConstraint target;
  RuleSource source = RuleSource::Hand;

  int specificity() const;
  void validate() const;  // throws FormatError on an empty target or context
  std::string to_text() const;
};

// Rule file grammar, one record per line ('#' comments):
//   [llc: ctx ,lc: ctx ,choose|delete: constraint ,rc: ctx ,rrc: ctx]
//   ctx := '[ ]' | '[' constraint ']'
Rule parse_rule_text(std::string_view text, RuleSource source, const std::string& file = {},
                     long line = 0);
std::vector<Rule> decode_rules(std::istream& in, RuleSource source, const std::string& name);
std::vector<Rule> decode_rules_text(std::string_view text, RuleSource source,
                                    const std::string& name = "<string>");
std::vector<Rule> load_rules(const std::string& path, RuleSource source);
std::string encode_rules(const std::vector<Rule>& rules);

enum class MatchMode { UnambiguousOnly, AnyParse };

struct PositionMatch {
  bool matched = false;
  std::vector<int> parses;  // indices of the subsumed parses (empty at a boundary)
};

// Matches a context constraint against a token. In unambiguous-only mode
// the token must have exactly one parse; in any-parse mode at least one
// subsumed parse suffices and all subsumed parses are reported. With
// stem_ok, a derived parse also matches through its immediate stem.
PositionMatch match_position(const FeatureConstraint& c, const Token& t, MatchMode mode,
                             bool stem_ok = false);

// As above, for position `pos` of a sentence; out-of-range positions are
// virtual sentence boundaries, matched only by an explicit [cat:boundary]
// constraint.
PositionMatch match_context_at(const Sentence& s, int pos, const FeatureConstraint& c,
                               MatchMode mode, bool stem_ok = false);

// How a rule set is applied; derived from rule provenance.
struct ApplyOptions {
  MatchMode context_mode = MatchMode::UnambiguousOnly;
  // Hand-crafted choose rules: ambiguous context positions that matched
  // are simultaneously reduced to their matching parses.
  bool simultaneous_contexts = false;
  // Learned rules: the rc constraint may match through a derived token's
  // immediate stem.
  bool stem_rc = false;

  static ApplyOptions hand_choose() { return {MatchMode::AnyParse, true, false}; }
  static ApplyOptions hand_delete() { return {MatchMode::UnambiguousOnly, false, false}; }
  static ApplyOptions learned() { return {MatchMode::UnambiguousOnly, false, true}; }
  static ApplyOptions for_rule(const Rule& r);
};

// Applies r at token i if every present context position matches and the
// target subsumes a proper, non-empty subset of token i's parses. Returns
// whether anything changed. Never leaves a token with zero parses.
bool apply_rule_at(Sentence& s, int i, const Rule& r, const ApplyOptions& opts);

struct PassStats {
  long applications = 0;
  long sweeps = 0;
};

// Sweeps sentence by sentence, left to right, rules in file order at each
// position, until a full sweep changes nothing. Sentences are independent;
// jobs > 1 processes them concurrently with identical results.
PassStats run_pass(Corpus& c, const std::vector<Rule>& rules, const ApplyOptions& opts,
                   int jobs = 1);

}  // namespace morphdis
