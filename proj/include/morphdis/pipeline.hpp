#pragma once

#include <string>
#include <vector>

#include "morphdis/corpus.hpp"
#include "morphdis/ctxstats.hpp"
#include "morphdis/featstruct.hpp"
#include "morphdis/rules.hpp"

namespace morphdis {

struct RuleSets {
  std::vector<Rule> hand_choose;
  std::vector<Rule> hand_delete;
  std::vector<Rule> learned_choose;
  std::vector<Rule> learned_delete;
};

struct PipelineConfig {
  // Working projection for the rule/statistics steps; originals are
  // restored on output. identity() disables projection.
  ProjectionTemplate working_template = ProjectionTemplate::identity();
  RelevanceMask masks;
  CtxStatsConfig ctxstats;
  bool enable_ctxstats = true;
  int jobs = 1;
};

// Ambiguity/recall/precision plus the sentence-level breakdown. A token is
// correct when its surviving parse set contains the gold parse; a sentence
// with every token correct counts as unambiguous-correct (every token one
// parse) or ambiguous-correct, otherwise under its count of incorrect
// tokens (1, 2, 3, >3).
struct EvalReport {
  long tokens = 0;
  long parses = 0;
  long correct = 0;
  double ambiguity = 0;
  double recall = 0;
  double precision = 0;

  long sentences = 0;
  long sent_unamb_correct = 0;
  long sent_amb_correct = 0;
  long sent_incorrect_1 = 0;
  long sent_incorrect_2 = 0;
  long sent_incorrect_3 = 0;
  long sent_incorrect_more = 0;
};

struct StageSnapshot {
  std::string label;
  EvalReport report;
};

// The five disambiguation steps in order: hand-crafted choose rules
// (ambiguous contexts allowed), hand-crafted delete rules, context
// statistics, learned choose rules to fixpoint, learned delete rules to
// fixpoint. The corpus is projected with cfg.working_template first and
// original parses are restored at the end. When gold and trace are given,
// a metric snapshot is recorded before the first step (BASE) and after
// each step.
Corpus disambiguate(const Corpus& input, const RuleSets& rules, const PipelineConfig& cfg,
                    const Corpus* gold = nullptr, std::vector<StageSnapshot>* trace = nullptr);

// Exact comparison mode: tokens are correct when a surviving parse equals
// the gold parse structurally; Projected compares project(parse, t) for
// gold available only at projected granularity.
struct EvalOptions {
  bool projected = false;
  ProjectionTemplate projection = ProjectionTemplate::identity();
};

// Requires pred and gold to align token for token (same surfaces, same
// order) and gold tokens to carry exactly one parse; throws FormatError
// naming the first mismatch otherwise.
EvalReport evaluate(const Corpus& pred, const Corpus& gold, const EvalOptions& opts = {});

// Plain-text rendering: stage table in the Ambiguity/Recall/Precision
// layout, sentence-level breakdown, and a machine-readable key=value block.
std::string render_stage_table(const std::vector<StageSnapshot>& stages);
std::string render_report(const EvalReport& r);

}  // namespace morphdis
