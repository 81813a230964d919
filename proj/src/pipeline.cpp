#include "morphdis/pipeline.hpp"

#include <cstdio>
#include <set>

namespace morphdis {

namespace {

void snapshot(const Corpus& work, const Corpus* gold, std::vector<StageSnapshot>* trace,
              const char* label) {
  if (!gold || !trace) return;
  trace->push_back(StageSnapshot{label, evaluate(restore_originals(work), *gold)});
}

}  // namespace

Corpus disambiguate(const Corpus& input, const RuleSets& rules, const PipelineConfig& cfg,
                    const Corpus* gold, std::vector<StageSnapshot>* trace) {
  Corpus work = project_corpus(input, cfg.working_template);
  snapshot(work, gold, trace, "BASE");

  // The five steps in order; the cycle repeats until a full cycle removes
  // nothing, so a step that unlocks an earlier one still settles and a
  // second disambiguate run is a no-op. Snapshots come from the first
  // cycle, matching the cumulative stage tables.
  bool first = true;
  long before = work.parse_count() + 1;
  while (work.parse_count() < before) {
    before = work.parse_count();

    run_pass(work, rules.hand_choose, ApplyOptions::hand_choose(), cfg.jobs);
    if (first) snapshot(work, gold, trace, "INITIAL CHOOSE");

    run_pass(work, rules.hand_delete, ApplyOptions::hand_delete(), cfg.jobs);
    if (first) snapshot(work, gold, trace, "INITIAL DELETE");

    if (cfg.enable_ctxstats) prune_by_context_stats(work, cfg.ctxstats, cfg.masks);
    if (first) snapshot(work, gold, trace, "CONTEXT STATISTICS");

    run_pass(work, rules.learned_choose, ApplyOptions::learned(), cfg.jobs);
    if (first) snapshot(work, gold, trace, "LEARNED CHOOSE");

    run_pass(work, rules.learned_delete, ApplyOptions::learned(), cfg.jobs);
    if (first) snapshot(work, gold, trace, "LEARNED DELETE");

    first = false;
  }
  return restore_originals(work);
}

EvalReport evaluate(const Corpus& pred, const Corpus& gold, const EvalOptions& opts) {
  if (pred.sentences.size() != gold.sentences.size())
    throw FormatError("evaluation corpora disagree in sentence count: " +
                      std::to_string(pred.sentences.size()) + " vs " +
                      std::to_string(gold.sentences.size()));

  EvalReport r;
  r.sentences = static_cast<long>(pred.sentences.size());
  long line = 0;
  for (size_t si = 0; si < pred.sentences.size(); ++si) {
    const Sentence& ps = pred.sentences[si];
    const Sentence& gs = gold.sentences[si];
    if (ps.tokens.size() != gs.tokens.size())
      throw FormatError("sentence " + std::to_string(si + 1) +
                        " disagrees in token count between prediction and gold");
    long incorrect = 0;
    bool all_unambiguous = true;
    for (size_t ti = 0; ti < ps.tokens.size(); ++ti) {
      ++line;
      const Token& pt = ps.tokens[ti];
      const Token& gt = gs.tokens[ti];
      if (pt.surface != gt.surface)
        throw FormatError("token " + std::to_string(line) + ": surface '" + pt.surface +
                          "' does not match gold surface '" + gt.surface + "'");
      if (gt.parses.size() != 1)
        throw FormatError("token " + std::to_string(line) + " ('" + gt.surface +
                          "'): gold standard must carry exactly one parse");
      ++r.tokens;
      r.parses += static_cast<long>(pt.parses.size());
      if (pt.ambiguous()) all_unambiguous = false;

      FeatureStructure goldfs = gt.parses[0].fs;
      if (opts.projected) goldfs = opts.projection.apply(goldfs);
      bool ok = false;
      for (const auto& p : pt.parses) {
        FeatureStructure fs = p.fs;
        if (opts.projected) fs = opts.projection.apply(fs);
        if (fs == goldfs) {
          ok = true;
          break;
        }
      }
      if (ok)
        ++r.correct;
      else
        ++incorrect;
    }
    if (incorrect == 0) {
      if (all_unambiguous)
        ++r.sent_unamb_correct;
      else
        ++r.sent_amb_correct;
    } else if (incorrect == 1) {
      ++r.sent_incorrect_1;
    } else if (incorrect == 2) {
      ++r.sent_incorrect_2;
    } else if (incorrect == 3) {
      ++r.sent_incorrect_3;
    } else {
      ++r.sent_incorrect_more;
    }
  }

  if (r.tokens > 0) {
    r.ambiguity = static_cast<double>(r.parses) / static_cast<double>(r.tokens);
    r.recall = static_cast<double>(r.correct) / static_cast<double>(r.tokens);
  }
  if (r.parses > 0) r.precision = static_cast<double>(r.correct) / static_cast<double>(r.parses);
  return r;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pct(long n, long total) {
  double p = total > 0 ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%ld (%.2f%%)", n, p);
  return buf;
}

}  // namespace

std::string render_stage_table(const std::vector<StageSnapshot>& stages) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %10s %11s %10s\n", "Disambiguation Stage", "Ambiguity",
                "Recall (%)", "Pre. (%)");
  out += buf;
  for (const auto& s : stages) {
    std::snprintf(buf, sizeof buf, "%-22s %10.3f %11.2f %10.2f\n", s.label.c_str(),
                  s.report.ambiguity, 100.0 * s.report.recall, 100.0 * s.report.precision);
    out += buf;
  }
  return out;
}

std::string render_report(const EvalReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-22s %10.3f %11.2f %10.2f\n", "RESULT", r.ambiguity,
                100.0 * r.recall, 100.0 * r.precision);
  out += "Disambiguation Stage     Ambiguity  Recall (%)   Pre. (%)\n";
  out += buf;
  out += "\nSentences\n";
  std::snprintf(buf, sizeof buf, "%-8s %-16s %-16s %-16s %-14s %-14s %-14s %-14s\n", "Total",
                "UA/C", "A/C", "C (UA/C+A/C)", "1", "2", "3", ">3");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-8ld %-16s %-16s %-16s %-14s %-14s %-14s %-14s\n",
                r.sentences, pct(r.sent_unamb_correct, r.sentences).c_str(),
                pct(r.sent_amb_correct, r.sentences).c_str(),
                pct(r.sent_unamb_correct + r.sent_amb_correct, r.sentences).c_str(),
                pct(r.sent_incorrect_1, r.sentences).c_str(),
                pct(r.sent_incorrect_2, r.sentences).c_str(),
                pct(r.sent_incorrect_3, r.sentences).c_str(),
                pct(r.sent_incorrect_more, r.sentences).c_str());
  out += buf;
  out += "\n";
  out += "tokens=" + std::to_string(r.tokens) + "\n";
  out += "parses=" + std::to_string(r.parses) + "\n";
  out += "correct=" + std::to_string(r.correct) + "\n";
  out += "ambiguity=" + fmt("%.6f", r.ambiguity) + "\n";
  out += "recall=" + fmt("%.6f", r.recall) + "\n";
  out += "precision=" + fmt("%.6f", r.precision) + "\n";
  out += "sentences=" + std::to_string(r.sentences) + "\n";
  out += "sentences.unambiguous_correct=" + std::to_string(r.sent_unamb_correct) + "\n";
  out += "sentences.ambiguous_correct=" + std::to_string(r.sent_amb_correct) + "\n";
  out += "sentences.incorrect_1=" + std::to_string(r.sent_incorrect_1) + "\n";
  out += "sentences.incorrect_2=" + std::to_string(r.sent_incorrect_2) + "\n";
  out += "sentences.incorrect_3=" + std::to_string(r.sent_incorrect_3) + "\n";
  out += "sentences.incorrect_more=" + std::to_string(r.sent_incorrect_more) + "\n";
  return out;
}

}  // namespace morphdis
