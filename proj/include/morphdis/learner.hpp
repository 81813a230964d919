#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphdis/corpus.hpp"
#include "morphdis/featstruct.hpp"
#include "morphdis/rules.hpp"

namespace morphdis {

// Occurrence statistics over unambiguous contexts and unambiguous parses.
// Keys are canonical keys of (relevance-masked, projected) parses; zero
// entries are never stored.
struct StatTables {
  std::map<std::string, long> count;
  std::map<std::string, std::map<std::string, long>> incontext;

  long cnt(const std::string& parse) const;
  long inc(const std::string& ctx, const std::string& parse) const;
  void add_cnt(const std::string& parse, long delta);
  void add_inc(const std::string& ctx, const std::string& parse, long delta);

  bool operator==(const StatTables&) const = default;
};

// The six context shapes, in decreasing specificity (rank 1..4).
enum class ContextShape { L2R2, L2, R2, L1R1, L1, R1 };
int shape_rank(ContextShape s);
bool shape_has_llc(ContextShape s);
bool shape_has_lc(ContextShape s);
bool shape_has_rc(ContextShape s);
bool shape_has_rrc(ContextShape s);

struct ContextKey {
  ContextShape shape = ContextShape::L1;
  std::string llc, lc, rc, rrc;  // keys for present positions, empty otherwise

  int rank() const { return shape_rank(shape); }
  std::string serial() const;
  bool operator<(const ContextKey& o) const { return serial() < o.serial(); }
};

// Remembers one representative structure per canonical key so learned
// rules can be materialized as feature constraints.
class KeyRegistry {
 public:
  void remember(const std::string& key, const FeatureStructure& fs);
  const FeatureStructure* find(const std::string& key) const;

 private:
  std::map<std::string, FeatureStructure> by_key_;
};

// Masked key of one neighbor position.
struct NeighborKey {
  bool unambiguous = false;
  std::string key;       // set when unambiguous
  std::string stem_key;  // set when the (projected) parse is derived; rc only
};

struct Window {
  NeighborKey llc, lc, rc, rrc;
};

// Keys of the four context positions around s.tokens[j]. Out-of-range
// positions are virtual boundaries (unambiguous, [CAT BOUNDARY]). When
// `keying` is given, parses are projected with it before masking.
Window window_around(const Sentence& s, int j, const RelevanceMask& masks,
                     const ProjectionTemplate* keying = nullptr, KeyRegistry* reg = nullptr);

// All valid context keys of the window; shapes with a derived rc yield two
// keys (top-level and stem). Deterministic order.
std::vector<ContextKey> contexts_from_window(const Window& w);

// Focus-masked key of one parse of the focus token.
std::string focus_key(const FeatureStructure& fs, const RelevanceMask& masks,
                      const ProjectionTemplate* keying = nullptr, KeyRegistry* reg = nullptr);

// Builds both tables from scratch. Parses are projected with `keying`
// before masking when given (otherwise the corpus is expected to be
// projected already). Derived tokens enter the count table twice (top
// level and stem); contexts with a derived rc enter the incontext table
// twice.
StatTables build_tables(const Corpus& c, const RelevanceMask& masks, KeyRegistry* reg = nullptr,
                        const ProjectionTemplate* keying = nullptr);

// Mutates token (si,ti)'s parse set while keeping incrementally maintained
// tables equal to a from-scratch rebuild: contributions of the affected
// window are subtracted, the mutation applied, and the contributions of
// the new state re-added.
void update_token_with_tables(Corpus& c, int si, int ti, StatTables& tables,
                              const RelevanceMask& masks, const ProjectionTemplate* keying,
                              KeyRegistry* reg,
                              const std::function<void(std::vector<Parse>&)>& mutate);

// Score of candidate "in context C choose Pi" against its competitors
// (sibling parse keys of the same ambiguous token occurrences):
//   Pmax = argmax over Pj with cnt(Pj) > 0 of (cnt(Pi)/cnt(Pj)) * inc(C,Pj)
//   score = inc(C,Pi) - (cnt(Pi)/cnt(Pmax)) * inc(C,Pmax)
// cnt(Pi) = 0 is smoothed to 1 in the ratio. With no competitor carrying
// both cnt > 0 and inc > 0 the score is inc(C,Pi).
double score_candidate(const std::string& context_serial, const std::string& parse,
                       const std::set<std::string>& competitors, const StatTables& tables);

// Per-specificity-rank selection thresholds (rank 1 lowest), damping
// constant, and the stop limit on the rank-1 threshold.
struct ThresholdSchedule {
  std::array<double, 4> rank{4.0, 6.0, 9.0, 13.0};
  double damping = 0.9;
  double stop_limit = 7.0;

  void validate() const;
};

struct LearnedRule {
  Rule rule;
  double score = 0.0;
  int iteration = 0;
};

// Drives one choose-learning run over a projected working corpus:
// candidates over unambiguous contexts of ambiguous tokens, maintained
// incrementally as selected rules are applied and the tables updated.
class ChooseLearner {
 public:
  ChooseLearner(Corpus work, ThresholdSchedule sched, RelevanceMask masks);
  ~ChooseLearner();
  ChooseLearner(const ChooseLearner&) = delete;
  ChooseLearner& operator=(const ChooseLearner&) = delete;

  bool has_unambiguous_evidence() const;
  // Selects the best qualifying candidate, applies it at all matching
  // contexts with incremental table maintenance, and returns the learned
  // rule; nothing when no candidate reaches its rank's threshold.
  std::optional<LearnedRule> iterate();
  // Multiplies all thresholds by the damping constant.
  void damp();

  const std::array<double, 4>& thresholds() const;
  const Corpus& corpus() const;
  const StatTables& tables() const;
  const KeyRegistry& registry() const;

  // Test hook, called after each occurrence-level application.
  std::function<void(const Corpus&, const StatTables&)> after_update;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ChooseLearnResult {
  std::vector<LearnedRule> rules;
  int iterations = 0;
  int damping_rounds = 0;
  std::string diagnostic;  // set when learning could not bootstrap
};

// Applies the hand-crafted rules to a projection of the training corpus,
// then runs the candidate/select/apply loop until no rule qualifies and
// the rank-1 threshold is below the stop limit (thresholds are damped in
// between). Emits rules in selection order.
ChooseLearnResult learn_choose(const Corpus& training, const std::vector<Rule>& hand_choose,
                               const std::vector<Rule>& hand_delete,
                               const ThresholdSchedule& sched, const RelevanceMask& masks,
                               const ProjectionTemplate& templates, std::ostream* log = nullptr);

struct DeleteLearnConfig {
  double fraction = 0.2;
  ProjectionTemplate templates;  // the finer, second set
};

// Reprocesses the training corpus with the finer templates, applies hand
// choose, learned choose and hand delete rules, and emits a delete rule
// for every parse scoring below fraction * (best sibling score) in some
// unambiguous context with an immediate-left and/or immediate-right
// component, where score(Pi) = inc(C,Pi)/cnt(Pi).
std::vector<LearnedRule> learn_delete(const Corpus& training,
                                      const std::vector<Rule>& hand_choose,
                                      const std::vector<Rule>& learned_choose,
                                      const std::vector<Rule>& hand_delete,
                                      const DeleteLearnConfig& cfg, const RelevanceMask& masks,
                                      std::ostream* log = nullptr);

}  // namespace morphdis
