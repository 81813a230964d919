#include "morphdis/ctxstats.hpp"

#include <cmath>

namespace morphdis {

void CtxStatsConfig::validate() const {
  if (passes < 1) throw FormatError("ctxstats.passes must be >= 1");
  if (w_both < 0 || w_left < 0 || w_right < 0)
    throw FormatError("ctxstats weights must be non-negative");
  if (std::abs(w_both + w_left + w_right - 1.0) > 1e-9)
    throw FormatError("ctxstats weights must sum to 1");
  if (fraction < 0 || fraction >= 1) throw FormatError("ctxstats.fraction must be in [0,1)");
}

namespace {

double q_value(const StatTables& t, const ContextKey& ctx, const std::string& parse) {
  long c = t.cnt(parse);
  if (c <= 0) return 0.0;
  return static_cast<double>(t.inc(ctx.serial(), parse)) / static_cast<double>(c);
}

}  // namespace

CtxStatsResult prune_by_context_stats(Corpus& c, const CtxStatsConfig& cfg,
                                      const RelevanceMask& masks,
                                      const ProjectionTemplate* keying) {
  cfg.validate();
  CtxStatsResult result;
  StatTables tables = build_tables(c, masks, nullptr, keying);

  for (int pass = 0; pass < cfg.passes; ++pass) {
    for (int si = 0; si < static_cast<int>(c.sentences.size()); ++si) {
      Sentence& s = c.sentences[si];
      for (int ti = 0; ti < static_cast<int>(s.tokens.size()); ++ti) {
        Token& tok = s.tokens[ti];
        if (!tok.ambiguous()) continue;
        Window w = window_around(s, ti, masks, keying, nullptr);
        if (!w.lc.unambiguous && !w.rc.unambiguous) continue;

        ContextKey both{ContextShape::L1R1, "", w.lc.key, w.rc.key, ""};
        ContextKey left{ContextShape::L1, "", w.lc.key, "", ""};
        ContextKey right{ContextShape::R1, "", "", w.rc.key, ""};

        std::vector<double> scores(tok.parses.size(), 0.0);
        double max_score = 0.0;
        for (size_t p = 0; p < tok.parses.size(); ++p) {
          std::string key = focus_key(tok.parses[p].fs, masks, keying, nullptr);
          double score;
          if (w.lc.unambiguous && w.rc.unambiguous) {
            score = cfg.w_both * q_value(tables, both, key) +
                    cfg.w_left * q_value(tables, left, key) +
                    cfg.w_right * q_value(tables, right, key);
          } else if (w.lc.unambiguous) {
            score = q_value(tables, left, key);
          } else {
            score = q_value(tables, right, key);
          }
          scores[p] = score;
          max_score = std::max(max_score, score);
        }

        std::vector<int> keep;
        for (size_t p = 0; p < tok.parses.size(); ++p)
          if (scores[p] >= cfg.fraction * max_score) keep.push_back(static_cast<int>(p));
        if (keep.empty() || keep.size() == tok.parses.size()) continue;

        result.deleted += static_cast<long>(tok.parses.size() - keep.size());
        update_token_with_tables(c, si, ti, tables, masks, keying, nullptr,
                                 [&keep](std::vector<Parse>& parses) {
                                   std::vector<Parse> kept;
                                   kept.reserve(keep.size());
                                   for (int p : keep) kept.push_back(std::move(parses[p]));
                                   parses = std::move(kept);
                                 });
      }
    }
  }
  return result;
}

}  // namespace morphdis
