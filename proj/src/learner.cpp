#include "morphdis/learner.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace morphdis {

// ------------------------------------------------------------ stat tables

long StatTables::cnt(const std::string& parse) const {
  auto it = count.find(parse);
  return it == count.end() ? 0 : it->second;
}

long StatTables::inc(const std::string& ctx, const std::string& parse) const {
  auto it = incontext.find(ctx);
  if (it == incontext.end()) return 0;
  auto jt = it->second.find(parse);
  return jt == it->second.end() ? 0 : jt->second;
}

void StatTables::add_cnt(const std::string& parse, long delta) {
  if (delta == 0) return;
  long& v = count[parse];
  v += delta;
  if (v == 0) count.erase(parse);
}

void StatTables::add_inc(const std::string& ctx, const std::string& parse, long delta) {
  if (delta == 0) return;
  auto& row = incontext[ctx];
  long& v = row[parse];
  v += delta;
  if (v == 0) row.erase(parse);
  if (row.empty()) incontext.erase(ctx);
}

// ---------------------------------------------------------------- shapes

int shape_rank(ContextShape s) {
  switch (s) {
    case ContextShape::L2R2: return 1;
    case ContextShape::L2:
    case ContextShape::R2: return 2;
    case ContextShape::L1R1: return 3;
    case ContextShape::L1:
    case ContextShape::R1: return 4;
  }
  return 0;
}

bool shape_has_llc(ContextShape s) { return s == ContextShape::L2R2 || s == ContextShape::L2; }
bool shape_has_lc(ContextShape s) {
  return s == ContextShape::L2R2 || s == ContextShape::L2 || s == ContextShape::L1R1 ||
         s == ContextShape::L1;
}
bool shape_has_rc(ContextShape s) {
  return s == ContextShape::L2R2 || s == ContextShape::R2 || s == ContextShape::L1R1 ||
         s == ContextShape::R1;
}
bool shape_has_rrc(ContextShape s) { return s == ContextShape::L2R2 || s == ContextShape::R2; }

std::string ContextKey::serial() const {
  std::string out = "s";
  out += std::to_string(static_cast<int>(shape));
  out += '|';
  out += llc;
  out += '|';
  out += lc;
  out += '|';
  out += rc;
  out += '|';
  out += rrc;
  return out;
}

// -------------------------------------------------------------- registry

void KeyRegistry::remember(const std::string& key, const FeatureStructure& fs) {
  by_key_.emplace(key, fs);
}

const FeatureStructure* KeyRegistry::find(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &it->second;
}

// ----------------------------------------------------------------- keying

namespace {

NeighborKey neighbor_key(const Sentence& s, int pos, ContextPosition role,
                         const RelevanceMask& masks, const ProjectionTemplate* keying,
                         KeyRegistry* reg) {
  NeighborKey out;
  const FeatureStructure* fs = nullptr;
  FeatureStructure projected;
  if (pos < 0 || pos >= static_cast<int>(s.tokens.size())) {
    fs = &boundary_parse();
  } else {
    const Token& t = s.tokens[pos];
    if (!t.unambiguous()) return out;
    if (keying && !keying->is_identity()) {
      projected = keying->apply(t.parses[0].fs);
      fs = &projected;
    } else {
      fs = &t.parses[0].fs;
    }
  }
  out.unambiguous = true;
  FeatureStructure masked = masks.apply(*fs, role);
  out.key = masked.canonical_key();
  if (reg) reg->remember(out.key, masked);
  if (role == ContextPosition::Rc && masked.derived()) {
    FeatureStructure stem = *masked.stem();
    out.stem_key = stem.canonical_key();
    if (reg) reg->remember(out.stem_key, stem);
  }
  return out;
}

}  // namespace

Window window_around(const Sentence& s, int j, const RelevanceMask& masks,
                     const ProjectionTemplate* keying, KeyRegistry* reg) {
  Window w;
  w.llc = neighbor_key(s, j - 2, ContextPosition::Llc, masks, keying, reg);
  w.lc = neighbor_key(s, j - 1, ContextPosition::Lc, masks, keying, reg);
  w.rc = neighbor_key(s, j + 1, ContextPosition::Rc, masks, keying, reg);
  w.rrc = neighbor_key(s, j + 2, ContextPosition::Rrc, masks, keying, reg);
  return w;
}

std::vector<ContextKey> contexts_from_window(const Window& w) {
  std::vector<ContextKey> out;
  auto add = [&](ContextShape shape) {
    ContextKey k;
    k.shape = shape;
    if (shape_has_llc(shape)) k.llc = w.llc.key;
    if (shape_has_lc(shape)) k.lc = w.lc.key;
    if (shape_has_rrc(shape)) k.rrc = w.rrc.key;
    if (shape_has_rc(shape)) {
      k.rc = w.rc.key;
      out.push_back(k);
      if (!w.rc.stem_key.empty()) {
        k.rc = w.rc.stem_key;
        out.push_back(std::move(k));
      }
    } else {
      out.push_back(std::move(k));
    }
  };
  const bool l1 = w.lc.unambiguous, l2 = w.llc.unambiguous;
  const bool r1 = w.rc.unambiguous, r2 = w.rrc.unambiguous;
  if (l2 && l1 && r1 && r2) add(ContextShape::L2R2);
  if (l2 && l1) add(ContextShape::L2);
  if (r1 && r2) add(ContextShape::R2);
  if (l1 && r1) add(ContextShape::L1R1);
  if (l1) add(ContextShape::L1);
  if (r1) add(ContextShape::R1);
  return out;
}

std::string focus_key(const FeatureStructure& fs, const RelevanceMask& masks,
                      const ProjectionTemplate* keying, KeyRegistry* reg) {
  FeatureStructure projected;
  const FeatureStructure* base = &fs;
  if (keying && !keying->is_identity()) {
    projected = keying->apply(fs);
    base = &projected;
  }
  FeatureStructure masked = masks.apply(*base, ContextPosition::Focus);
  std::string key = masked.canonical_key();
  if (reg) reg->remember(key, masked);
  return key;
}

namespace {

// (context serial, focus parse key) increments contributed by position j
// when its token is unambiguous.
std::vector<std::pair<std::string, std::string>> focus_contributions(
    const Sentence& s, int j, const RelevanceMask& masks, const ProjectionTemplate* keying,
    KeyRegistry* reg) {
  std::vector<std::pair<std::string, std::string>> out;
  const Token& t = s.tokens[j];
  if (!t.unambiguous()) return out;
  std::string fkey = focus_key(t.parses[0].fs, masks, keying, reg);
  Window w = window_around(s, j, masks, keying, reg);
  for (const ContextKey& ctx : contexts_from_window(w)) out.emplace_back(ctx.serial(), fkey);
  return out;
}

// Count-table keys contributed by a token: its focus key, plus the stem
// key when the (masked) parse is derived.
std::vector<std::string> count_contributions(const Token& t, const RelevanceMask& masks,
                                             const ProjectionTemplate* keying, KeyRegistry* reg) {
  std::vector<std::string> out;
  if (!t.unambiguous()) return out;
  FeatureStructure projected;
  const FeatureStructure* base = &t.parses[0].fs;
  if (keying && !keying->is_identity()) {
    projected = keying->apply(*base);
    base = &projected;
  }
  FeatureStructure masked = masks.apply(*base, ContextPosition::Focus);
  out.push_back(masked.canonical_key());
  if (reg) reg->remember(out.back(), masked);
  if (masked.derived()) {
    FeatureStructure stem = *masked.stem();
    out.push_back(stem.canonical_key());
    if (reg) reg->remember(out.back(), stem);
  }
  return out;
}

}  // namespace

StatTables build_tables(const Corpus& c, const RelevanceMask& masks, KeyRegistry* reg,
                        const ProjectionTemplate* keying) {
  StatTables t;
  for (const auto& s : c.sentences) {
    for (int j = 0; j < static_cast<int>(s.tokens.size()); ++j) {
      for (const std::string& k : count_contributions(s.tokens[j], masks, keying, reg))
        t.add_cnt(k, 1);
      for (const auto& [ctx, parse] : focus_contributions(s, j, masks, keying, reg))
        t.add_inc(ctx, parse, 1);
    }
  }
  return t;
}

void update_token_with_tables(Corpus& c, int si, int ti, StatTables& tables,
                              const RelevanceMask& masks, const ProjectionTemplate* keying,
                              KeyRegistry* reg,
                              const std::function<void(std::vector<Parse>&)>& mutate) {
  Sentence& s = c.sentences[si];
  const int n = static_cast<int>(s.tokens.size());
  const int lo = std::max(0, ti - 2), hi = std::min(n - 1, ti + 2);

  for (int j = lo; j <= hi; ++j)
    for (const auto& [ctx, parse] : focus_contributions(s, j, masks, keying, reg))
      tables.add_inc(ctx, parse, -1);
  for (const std::string& k : count_contributions(s.tokens[ti], masks, keying, reg))
    tables.add_cnt(k, -1);

  mutate(s.tokens[ti].parses);

  for (int j = lo; j <= hi; ++j)
    for (const auto& [ctx, parse] : focus_contributions(s, j, masks, keying, reg))
      tables.add_inc(ctx, parse, 1);
  for (const std::string& k : count_contributions(s.tokens[ti], masks, keying, reg))
    tables.add_cnt(k, 1);
}

// ---------------------------------------------------------------- scoring

double score_candidate(const std::string& context_serial, const std::string& parse,
                       const std::set<std::string>& competitors, const StatTables& tables) {
  const double inc_pi = static_cast<double>(tables.inc(context_serial, parse));
  double cnt_pi = static_cast<double>(tables.cnt(parse));
  if (cnt_pi <= 0) cnt_pi = 1;  // smoothing: candidate parses may never occur unambiguously

  bool have = false;
  double best = 0;
  for (const std::string& pj : competitors) {
    if (pj == parse) continue;
    long cnt_pj = tables.cnt(pj);
    if (cnt_pj <= 0) continue;
    double v = cnt_pi / static_cast<double>(cnt_pj) *
               static_cast<double>(tables.inc(context_serial, pj));
    if (!have || v > best) {
      best = v;
      have = true;
    }
  }
  if (!have || best <= 0) return inc_pi;
  return inc_pi - best;
}

void ThresholdSchedule::validate() const {
  for (int i = 0; i + 1 < 4; ++i)
    if (rank[i] > rank[i + 1])
      throw FormatError("thresholds must not decrease with rank");
  if (!(damping > 0 && damping < 1)) throw FormatError("damping must be in (0,1)");
}

// ------------------------------------------------------------ the learner

namespace {

struct Occurrence {
  std::vector<int> keep;             // focus parse indices matching the candidate parse
  std::set<std::string> siblings;    // other parse keys of the token
};

struct Candidate {
  ContextKey ctx;
  std::string parse;
  std::map<std::pair<int, int>, Occurrence> occ;  // (sentence, token) -> occurrence
};

Rule materialize_rule(const ContextKey& ctx, const std::string& parse_key, RuleAction action,
                      const KeyRegistry& reg) {
  auto constraint_for = [&reg](const std::string& key) {
    const FeatureStructure* fs = reg.find(key);
    if (!fs) throw FormatError("internal: unregistered key " + key);
    return FeatureConstraint::from_structure(*fs);
  };
  Rule r;
  r.source = RuleSource::Learned;
  r.action = action;
  if (shape_has_llc(ctx.shape)) r.llc = constraint_for(ctx.llc);
  if (shape_has_lc(ctx.shape)) r.lc = constraint_for(ctx.lc);
  if (shape_has_rc(ctx.shape)) r.rc = constraint_for(ctx.rc);
  if (shape_has_rrc(ctx.shape)) r.rrc = constraint_for(ctx.rrc);
  r.target = constraint_for(parse_key);
  r.validate();
  return r;
}

}  // namespace

struct ChooseLearner::Impl {
  Corpus corpus;
  std::array<double, 4> thresholds;
  double damping;
  double stop_limit;
  RelevanceMask masks;
  KeyRegistry registry;
  StatTables tables;

  using CandId = std::pair<std::string, std::string>;  // (ctx serial, parse key)
  std::map<CandId, Candidate> candidates;
  std::map<std::pair<int, int>, std::set<CandId>> by_focus;
  int iterations = 0;

  ChooseLearner* owner = nullptr;

  void generate_for_focus(int si, int ti) {
    const Sentence& s = corpus.sentences[si];
    const Token& t = s.tokens[ti];
    if (!t.ambiguous()) return;
    Window w = window_around(s, ti, masks, nullptr, &registry);
    std::vector<ContextKey> ctxs = contexts_from_window(w);
    if (ctxs.empty()) return;

    // group parse indices by focus key
    std::vector<std::pair<std::string, std::vector<int>>> groups;
    for (int p = 0; p < static_cast<int>(t.parses.size()); ++p) {
      std::string k = focus_key(t.parses[p].fs, masks, nullptr, &registry);
      bool found = false;
      for (auto& [key, idx] : groups) {
        if (key == k) {
          idx.push_back(p);
          found = true;
          break;
        }
      }
      if (!found) groups.emplace_back(std::move(k), std::vector<int>{p});
    }

    for (const ContextKey& ctx : ctxs) {
      std::string serial = ctx.serial();
      for (const auto& [key, idx] : groups) {
        if (idx.size() == t.parses.size()) continue;  // would not reduce anything
        CandId id{serial, key};
        auto [it, fresh] = candidates.try_emplace(id);
        if (fresh) {
          it->second.ctx = ctx;
          it->second.parse = key;
        }
        Occurrence& occ = it->second.occ[{si, ti}];
        occ.keep = idx;
        occ.siblings.clear();
        for (const auto& [other, oidx] : groups)
          if (other != key) occ.siblings.insert(other);
        by_focus[{si, ti}].insert(std::move(id));
      }
    }
  }

  void wipe_focus(int si, int ti) {
    auto it = by_focus.find({si, ti});
    if (it == by_focus.end()) return;
    for (const CandId& id : it->second) {
      auto ct = candidates.find(id);
      if (ct == candidates.end()) continue;
      ct->second.occ.erase({si, ti});
      if (ct->second.occ.empty()) candidates.erase(ct);
    }
    by_focus.erase(it);
  }

  void generate_all() {
    for (int si = 0; si < static_cast<int>(corpus.sentences.size()); ++si)
      for (int ti = 0; ti < static_cast<int>(corpus.sentences[si].tokens.size()); ++ti)
        generate_for_focus(si, ti);
  }

  std::set<std::string> competitors_of(const Candidate& c) const {
    std::set<std::string> out;
    for (const auto& [pos, occ] : c.occ) out.insert(occ.siblings.begin(), occ.siblings.end());
    out.erase(c.parse);
    return out;
  }

  // Applies the candidate at one focus and keeps the tables and candidate
  // store consistent with the new corpus state.
  void apply_occurrence(int si, int ti, const std::vector<int>& keep) {
    update_token_with_tables(corpus, si, ti, tables, masks, nullptr, &registry,
                             [&keep](std::vector<Parse>& parses) {
                               std::vector<Parse> kept;
                               kept.reserve(keep.size());
                               for (int p : keep) kept.push_back(std::move(parses[p]));
                               parses = std::move(kept);
                             });
    // candidates touching the changed region are regenerated
    const int n = static_cast<int>(corpus.sentences[si].tokens.size());
    for (int j = std::max(0, ti - 2); j <= std::min(n - 1, ti + 2); ++j) {
      wipe_focus(si, j);
      generate_for_focus(si, j);
    }
    if (owner && owner->after_update) owner->after_update(corpus, tables);
  }
};

ChooseLearner::ChooseLearner(Corpus work, ThresholdSchedule sched, RelevanceMask masks)
    : impl_(std::make_unique<Impl>()) {
  sched.validate();
  impl_->corpus = std::move(work);
  impl_->thresholds = sched.rank;
  impl_->damping = sched.damping;
  impl_->stop_limit = sched.stop_limit;
  impl_->masks = std::move(masks);
  impl_->owner = this;
  impl_->tables = build_tables(impl_->corpus, impl_->masks, &impl_->registry);
  impl_->generate_all();
}

ChooseLearner::~ChooseLearner() = default;

bool ChooseLearner::has_unambiguous_evidence() const { return !impl_->tables.count.empty(); }

const std::array<double, 4>& ChooseLearner::thresholds() const { return impl_->thresholds; }
const Corpus& ChooseLearner::corpus() const { return impl_->corpus; }
const StatTables& ChooseLearner::tables() const { return impl_->tables; }
const KeyRegistry& ChooseLearner::registry() const { return impl_->registry; }

void ChooseLearner::damp() {
  for (double& t : impl_->thresholds) t *= impl_->damping;
}

std::optional<LearnedRule> ChooseLearner::iterate() {
  // best candidate per specificity rank
  struct Best {
    double score = 0;
    std::vector<const Candidate*> tied;
  };
  std::array<Best, 4> best;
  for (const auto& [id, cand] : impl_->candidates) {
    double s = score_candidate(id.first, cand.parse, impl_->competitors_of(cand), impl_->tables);
    Best& b = best[cand.ctx.rank() - 1];
    if (b.tied.empty() || s > b.score) {
      b.score = s;
      b.tied.assign(1, &cand);
    } else if (s == b.score) {
      b.tied.push_back(&cand);
    }
  }

  // most specific rank whose top score reaches its threshold wins
  const Candidate* chosen = nullptr;
  double chosen_score = 0;
  for (int r = 0; r < 4; ++r) {
    if (best[r].tied.empty() || best[r].score < impl_->thresholds[r]) continue;
    chosen = best[r].tied.front();
    if (best[r].tied.size() > 1) {
      // deterministic tie-break: smallest serialized rule
      std::string best_text;
      for (const Candidate* c : best[r].tied) {
        std::string text =
            materialize_rule(c->ctx, c->parse, RuleAction::Choose, impl_->registry).to_text();
        if (best_text.empty() || text < best_text) {
          best_text = std::move(text);
          chosen = c;
        }
      }
    }
    chosen_score = best[r].score;
    break;
  }
  if (!chosen) return std::nullopt;

  LearnedRule out;
  out.rule = materialize_rule(chosen->ctx, chosen->parse, RuleAction::Choose, impl_->registry);
  out.score = chosen_score;
  out.iteration = ++impl_->iterations;

  // snapshot, then apply at every matching occurrence
  std::vector<std::pair<std::pair<int, int>, std::vector<int>>> occs;
  occs.reserve(chosen->occ.size());
  for (const auto& [pos, occ] : chosen->occ) occs.emplace_back(pos, occ.keep);
  for (const auto& [pos, keep] : occs) impl_->apply_occurrence(pos.first, pos.second, keep);
  return out;
}

// ----------------------------------------------------------------- drivers

ChooseLearnResult learn_choose(const Corpus& training, const std::vector<Rule>& hand_choose,
                               const std::vector<Rule>& hand_delete,
                               const ThresholdSchedule& sched, const RelevanceMask& masks,
                               const ProjectionTemplate& templates, std::ostream* log) {
  ChooseLearnResult result;
  Corpus work = project_corpus(training, templates);
  run_pass(work, hand_choose, ApplyOptions::hand_choose());
  run_pass(work, hand_delete, ApplyOptions::hand_delete());

  ChooseLearner learner(std::move(work), sched, masks);
  if (!learner.has_unambiguous_evidence()) {
    result.diagnostic = "lack of sufficient unambiguous contexts to bootstrap learning";
    if (log) *log << "learn-choose: " << result.diagnostic << "\n";
    return result;
  }

  while (true) {
    std::optional<LearnedRule> r = learner.iterate();
    if (r) {
      ++result.iterations;
      if (log)
        *log << "learn-choose: iter=" << r->iteration << " score=" << r->score
             << " rank=" << r->rule.specificity() << " rule=" << r->rule.to_text() << "\n";
      result.rules.push_back(std::move(*r));
      continue;
    }
    if (learner.thresholds()[0] < sched.stop_limit) break;
    learner.damp();
    ++result.damping_rounds;
    if (log) {
      const auto& t = learner.thresholds();
      *log << "learn-choose: damp round=" << result.damping_rounds << " thresholds=" << t[0]
           << "," << t[1] << "," << t[2] << "," << t[3] << "\n";
    }
  }
  if (log)
    *log << "learn-choose: done rules=" << result.rules.size()
         << " damping_rounds=" << result.damping_rounds << "\n";
  return result;
}

std::vector<LearnedRule> learn_delete(const Corpus& training,
                                      const std::vector<Rule>& hand_choose,
                                      const std::vector<Rule>& learned_choose,
                                      const std::vector<Rule>& hand_delete,
                                      const DeleteLearnConfig& cfg, const RelevanceMask& masks,
                                      std::ostream* log) {
  if (!(cfg.fraction > 0 && cfg.fraction < 1))
    throw FormatError("delete fraction must be in (0,1)");

  Corpus work = project_corpus(training, cfg.templates);
  run_pass(work, hand_choose, ApplyOptions::hand_choose());
  run_pass(work, learned_choose, ApplyOptions::learned());
  run_pass(work, hand_delete, ApplyOptions::hand_delete());

  KeyRegistry registry;
  StatTables tables = build_tables(work, masks, &registry);

  std::vector<LearnedRule> out;
  std::set<std::string> seen;
  for (const auto& s : work.sentences) {
    for (int j = 0; j < static_cast<int>(s.tokens.size()); ++j) {
      const Token& t = s.tokens[j];
      if (!t.ambiguous()) continue;
      Window w = window_around(s, j, masks, nullptr, &registry);
      for (const ContextKey& ctx : contexts_from_window(w)) {
        if (ctx.shape != ContextShape::L1R1 && ctx.shape != ContextShape::L1 &&
            ctx.shape != ContextShape::R1)
          continue;
        std::string serial = ctx.serial();
        std::vector<std::pair<std::string, double>> scored;
        double max_score = 0;
        for (const auto& p : t.parses) {
          std::string k = focus_key(p.fs, masks, nullptr, &registry);
          long c = tables.cnt(k);
          double score =
              c > 0 ? static_cast<double>(tables.inc(serial, k)) / static_cast<double>(c) : 0.0;
          max_score = std::max(max_score, score);
          scored.emplace_back(std::move(k), score);
        }
        for (const auto& [k, score] : scored) {
          if (score >= cfg.fraction * max_score) continue;
          Rule rule = materialize_rule(ctx, k, RuleAction::Delete, registry);
          std::string text = rule.to_text();
          if (!seen.insert(text).second) continue;
          LearnedRule lr;
          lr.rule = std::move(rule);
          lr.score = score;
          out.push_back(std::move(lr));
          if (log)
            *log << "learn-delete: score=" << score << " max=" << max_score
                 << " rule=" << text << "\n";
        }
      }
    }
  }
  if (log) *log << "learn-delete: done rules=" << out.size() << "\n";
  return out;
}

}  // namespace morphdis
