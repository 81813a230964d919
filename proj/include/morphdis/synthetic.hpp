#pragma once

#include <cstdint>
#include <vector>

#include "morphdis/corpus.hpp"
#include "morphdis/rules.hpp"

namespace morphdis {

// Synthetic-corpus generation for experiments and tests: plants the given
// choose rules as exceptionless regularities of an artificial language
// and emits an ambiguous corpus together with its gold standard.
struct SyntheticSpec {
  std::uint64_t seed = 0;
  int sentences = 500;
  std::vector<Rule> planted;  // choose rules; contexts and targets must name cat
};

struct SyntheticResult {
  Corpus ambiguous;
  Corpus gold;
};

// Deterministic in the spec. Each sentence mixes evidence units (a trigger
// next to an unambiguous token carrying the rule's target shape), planted
// sites (the trigger next to an ambiguous token whose gold parse is the
// target shape plus several decoy parses), independent unambiguous
// fillers, and a small rate of residual ambiguous fillers that no rule
// resolves.
SyntheticResult gen_synthetic(const SyntheticSpec& spec);

}  // namespace morphdis
