#include "morphdis/synthetic.hpp"

#include <algorithm>
#include <random>

#include "textutil.hpp"

namespace morphdis {

namespace {

FeatureStructure make_shape(const char* cat,
                            std::initializer_list<std::pair<const char*, const char*>> feats) {
  FeatureStructure fs;
  fs.set(kCat, cat);
  for (const auto& [n, v] : feats) fs.set(n, v);
  return fs;
}

FeatureStructure with_root(FeatureStructure fs, const std::string& root) {
  FeatureStructure out;
  const std::string* cat = fs.atom(kCat);
  out.set(kCat, cat ? *cat : "X");
  out.set(kRoot, root);
  for (const auto& [n, v] : fs.features()) {
    if (n == kCat || n == kRoot) continue;
    if (const auto* atom = std::get_if<std::string>(&v)) out.set(n, *atom);
  }
  return out;
}

// Shape equality ignoring ROOT.
bool same_shape(const FeatureStructure& a, const FeatureStructure& b) {
  RelevanceMask m;
  m.drop(ContextPosition::Focus, kRoot);
  return m.apply(a, ContextPosition::Focus) == m.apply(b, ContextPosition::Focus);
}

// Fills a full parse satisfying the constraint: category defaults plus the
// constrained features (uppercased).
FeatureStructure materialize(const FeatureConstraint& c, const std::string& fallback_root) {
  std::string cat;
  for (const auto& [n, a] : c.features())
    if (n == kCat) cat = to_upper(a.text);
  if (cat.empty()) throw FormatError("synthetic generation requires cat in every constraint");

  FeatureStructure fs;
  if (cat == "NOUN")
    fs = make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "NOM"}});
  else if (cat == "VERB")
    fs = make_shape("VERB", {{"SENSE", "POS"}, {"TAM1", "PRES"}, {"AGR", "3SG"}});
  else if (cat == "ADJ")
    fs = make_shape("ADJ", {{"TYPE", "QUAL"}});
  else
    fs = make_shape(cat.c_str(), {});
  for (const auto& [n, a] : c.features()) {
    if (n == kStem) continue;
    fs.set(n, to_upper(a.text));
  }
  if (!fs.has(kRoot)) fs.set(kRoot, to_upper(fallback_root));
  // keep CAT/ROOT leading so linearization stays well-formed
  return with_root(fs, *fs.atom(kRoot));
}

struct WordType {
  std::string surface;
  std::vector<FeatureStructure> parses;
};

Token type_token(const WordType& t) {
  Token tok;
  tok.surface = t.surface;
  for (const auto& fs : t.parses) tok.parses.emplace_back(fs);
  return tok;
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
};

struct PlantedRule {
  const Rule* rule;
  std::vector<FeatureStructure> triggers;  // one per present context position, left to right
  int target_slot;                         // index of the focus slot within the unit
  FeatureStructure gold;                   // full parse chosen by the rule
  WordType amb;                            // ambiguous type used at planted sites
};

}  // namespace

SyntheticResult gen_synthetic(const SyntheticSpec& spec) {
  if (spec.planted.empty()) throw FormatError("synthetic generation needs planted rules");
  for (const Rule& r : spec.planted) {
    r.validate();
    if (r.action != RuleAction::Choose)
      throw FormatError("synthetic generation supports planted choose rules only");
  }
  Rng rng(spec.seed);

  // decoy shapes; none may satisfy a planted target
  std::vector<FeatureStructure> decoys = {
      make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "DAT"}}),
      make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "LOC"}}),
      make_shape("VERB", {{"SENSE", "POS"}, {"TAM1", "OPT"}, {"AGR", "3SG"}}),
      make_shape("VERB", {{"SENSE", "POS"}, {"TAM1", "PRES"}, {"AGR", "3SG"}}),
      make_shape("ADJ", {{"TYPE", "QUAL"}}),
      make_shape("ADVERB", {}),
  };
  for (auto it = decoys.begin(); it != decoys.end();) {
    bool hit = false;
    FeatureStructure probe = with_root(*it, "X");
    for (const Rule& r : spec.planted)
      if (r.target.subsumes(probe)) hit = true;
    it = hit ? decoys.erase(it) : it + 1;
  }
  if (decoys.size() < 3)
    throw FormatError("synthetic generation: planted targets leave too few decoy shapes");

  // planted machinery per rule
  std::vector<PlantedRule> planted;
  for (size_t ri = 0; ri < spec.planted.size(); ++ri) {
    const Rule& r = spec.planted[ri];
    PlantedRule p;
    p.rule = &r;
    std::string tag = std::to_string(ri + 1);
    if (r.llc) p.triggers.push_back(materialize(*r.llc, "t" + tag + "llc"));
    if (r.lc) p.triggers.push_back(materialize(*r.lc, "t" + tag + "lc"));
    p.target_slot = static_cast<int>(p.triggers.size());
    if (r.rc) p.triggers.push_back(materialize(*r.rc, "t" + tag + "rc"));
    if (r.rrc) p.triggers.push_back(materialize(*r.rrc, "t" + tag + "rrc"));

    p.gold = materialize(r.target, "amb" + tag);
    p.amb.surface = "amb" + tag;
    p.amb.parses.push_back(with_root(p.gold, "amb" + tag));
    int ndecoy = 3 + static_cast<int>(ri % 2);  // 3 or 4 decoys
    for (int d = 0; d < ndecoy && d < static_cast<int>(decoys.size()); ++d) {
      int pick = (static_cast<int>(ri) + d) % static_cast<int>(decoys.size());
      FeatureStructure decoy = with_root(decoys[pick], "amb" + tag);
      bool dup = false;
      for (const auto& existing : p.amb.parses)
        if (existing == decoy) dup = true;
      if (!dup) p.amb.parses.push_back(std::move(decoy));
    }
    planted.push_back(std::move(p));
  }

  // unambiguous filler inventory: decoy shapes, gold shapes, extras
  std::vector<FeatureStructure> filler_shapes = decoys;
  filler_shapes.push_back(make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "ACC"}}));
  filler_shapes.push_back(make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "GEN"}}));
  filler_shapes.push_back(make_shape("VERB", {{"SENSE", "POS"}, {"TAM1", "PAST"}, {"AGR", "3SG"}}));
  for (const auto& p : planted) {
    bool have = false;
    for (const auto& s : filler_shapes)
      if (same_shape(with_root(s, "X"), with_root(p.gold, "X"))) have = true;
    if (!have) filler_shapes.push_back(p.gold);
  }
  std::vector<WordType> fillers;
  std::vector<std::vector<int>> fillers_by_shape(filler_shapes.size());
  for (size_t si = 0; si < filler_shapes.size(); ++si) {
    for (int k = 0; k < 2; ++k) {
      WordType w;
      w.surface = "w" + std::to_string(si + 1) + (k ? "b" : "a");
      w.parses.push_back(with_root(filler_shapes[si], w.surface));
      fillers_by_shape[si].push_back(static_cast<int>(fillers.size()));
      fillers.push_back(std::move(w));
    }
  }
  // residual ambiguous filler: no planted rule resolves it
  WordType residual;
  residual.surface = "fx";
  residual.parses.push_back(
      with_root(make_shape("NOUN", {{"AGR", "3SG"}, {"POSS", "NONE"}, {"CASE", "LOC"}}), "fx"));
  residual.parses.push_back(
      with_root(make_shape("VERB", {{"SENSE", "POS"}, {"TAM1", "PRES"}, {"AGR", "3SG"}}), "fx"));

  auto gold_filler_of = [&](const PlantedRule& p) -> const WordType& {
    for (size_t si = 0; si < filler_shapes.size(); ++si)
      if (same_shape(with_root(filler_shapes[si], "X"), with_root(p.gold, "X")))
        return fillers[fillers_by_shape[si][0]];
    throw FormatError("internal: gold shape missing from filler inventory");
  };

  SyntheticResult out;
  out.ambiguous.provenance = "synthetic";
  out.gold.provenance = "synthetic-gold";

  for (int s = 0; s < spec.sentences; ++s) {
    Sentence amb_s, gold_s;
    auto emit = [&](const Token& tok, const FeatureStructure& gold_fs) {
      amb_s.tokens.push_back(tok);
      Token g;
      g.surface = tok.surface;
      g.origin = tok.origin;
      g.parses.emplace_back(gold_fs);
      gold_s.tokens.push_back(std::move(g));
    };
    auto emit_unit = [&](const PlantedRule& p, bool site) {
      int slot = 0;
      size_t trig = 0;
      int total = static_cast<int>(p.triggers.size()) + 1;
      for (; slot < total; ++slot) {
        if (slot == p.target_slot) {
          if (site) {
            Token tok = type_token(p.amb);
            emit(tok, p.amb.parses[0]);
          } else {
            const WordType& w = gold_filler_of(p);
            emit(type_token(w), w.parses[0]);
          }
        } else {
          WordType w;
          w.surface = to_lower(*p.triggers[trig].atom(kRoot));
          w.parses.push_back(p.triggers[trig]);
          emit(type_token(w), w.parses[0]);
          ++trig;
        }
      }
    };

    int units = 4 + rng.below(3);
    for (int u = 0; u < units; ++u) {
      int roll = rng.below(100);
      if (roll < 15) {
        emit_unit(planted[rng.below(static_cast<int>(planted.size()))], /*site=*/false);
      } else if (roll < 50) {
        emit_unit(planted[rng.below(static_cast<int>(planted.size()))], /*site=*/true);
      } else if (roll < 95) {
        const WordType& w = fillers[rng.below(static_cast<int>(fillers.size()))];
        emit(type_token(w), w.parses[0]);
      } else {
        Token tok = type_token(residual);
        emit(tok, residual.parses[rng.below(static_cast<int>(residual.parses.size()))]);
      }
    }
    out.ambiguous.sentences.push_back(std::move(amb_s));
    out.gold.sentences.push_back(std::move(gold_s));
  }

  // consistency pass: wherever a planted rule's context holds against the
  // gold parses, the focus gold parse must satisfy the target
  for (size_t si = 0; si < out.gold.sentences.size(); ++si) {
    Sentence& gs = out.gold.sentences[si];
    Sentence& as = out.ambiguous.sentences[si];
    for (int ti = 0; ti < static_cast<int>(gs.tokens.size()); ++ti) {
      for (const auto& p : planted) {
        const Rule& r = *p.rule;
        auto gold_matches = [&](const std::optional<FeatureConstraint>& c, int pos) {
          if (!c) return true;
          if (pos < 0 || pos >= static_cast<int>(gs.tokens.size()))
            return c->matches_boundary();
          return c->subsumes(gs.tokens[pos].parses[0].fs);
        };
        if (!gold_matches(r.llc, ti - 2) || !gold_matches(r.lc, ti - 1) ||
            !gold_matches(r.rc, ti + 1) || !gold_matches(r.rrc, ti + 2))
          continue;
        // context holds; if the rule selects exactly one parse of this
        // token, that parse is the gold one
        const Token& cand = as.tokens[ti];
        std::vector<int> subsumed;
        for (int pi = 0; pi < static_cast<int>(cand.parses.size()); ++pi)
          if (r.target.subsumes(cand.parses[pi].fs)) subsumed.push_back(pi);
        if (subsumed.size() == 1) {
          gs.tokens[ti].parses.clear();
          gs.tokens[ti].parses.emplace_back(cand.parses[subsumed[0]].fs);
        }
        break;  // first rule wins
      }
    }
  }
  return out;
}

}  // namespace morphdis
