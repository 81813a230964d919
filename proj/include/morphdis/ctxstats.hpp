#pragma once

#include "morphdis/corpus.hpp"
#include "morphdis/featstruct.hpp"
#include "morphdis/learner.hpp"

namespace morphdis {

struct CtxStatsConfig {
  int passes = 3;
  double w_both = 0.5;   // lc and rc both unambiguous
  double w_left = 0.25;  // (lc --) component
  double w_right = 0.25; // (-- rc) component
  double fraction = 0.2;

  void validate() const;  // passes >= 1, weights non-negative and summing to 1
};

struct CtxStatsResult {
  long deleted = 0;
};

// Removes parses that never survive in unambiguous contexts of the text
// itself. Tables are built on the current corpus; each pass scans tokens
// left to right and deletes, on the fly (tables updated before the next
// token), every parse of an ambiguous token whose score falls below
// fraction * (best sibling score), where the score is
//   w_both*q(lc--rc) + w_left*q(lc--) + w_right*q(--rc)
// with both neighbors unambiguous, or the single corresponding q
// otherwise, and q(C) = incontext(C,Pi)/count(Pi) (0 when count is 0).
// Never empties a token's parse set. With `keying`, parses are projected
// for keying only; the corpus parses themselves are not replaced.
CtxStatsResult prune_by_context_stats(Corpus& c, const CtxStatsConfig& cfg,
                                      const RelevanceMask& masks,
                                      const ProjectionTemplate* keying = nullptr);

}  // namespace morphdis
