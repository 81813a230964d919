#include <doctest.h>

#include <cmath>
#include <sstream>

#include "morphdis/learner.hpp"
#include "testutil.hpp"

using namespace morphdis;
using namespace morphdis::testutil;

namespace {

Token unamb(const std::string& surface, const std::string& parse) {
  return make_token(surface, {parse_fs(parse)});
}

// Independent brute-force table builder, written directly from the
// definitions: every unambiguous token contributes its masked parse key to
// count (twice when derived); every valid context shape around it
// contributes to incontext, with derived rc entered twice.
StatTables oracle_tables(const Corpus& c, const RelevanceMask& masks) {
  StatTables t;
  auto key_at = [&](const Sentence& s, int pos, ContextPosition role) -> std::string {
    const FeatureStructure& fs = (pos < 0 || pos >= static_cast<int>(s.tokens.size()))
                                     ? boundary_parse()
                                     : s.tokens[pos].parses[0].fs;
    return masks.apply(fs, role).canonical_key();
  };
  auto is_unamb = [&](const Sentence& s, int pos) {
    return pos < 0 || pos >= static_cast<int>(s.tokens.size()) ||
           s.tokens[pos].parses.size() == 1;
  };
  auto rc_stem_key = [&](const Sentence& s, int pos) -> std::string {
    if (pos < 0 || pos >= static_cast<int>(s.tokens.size())) return {};
    FeatureStructure masked = masks.apply(s.tokens[pos].parses[0].fs, ContextPosition::Rc);
    if (!masked.derived()) return {};
    return masked.stem()->canonical_key();
  };

  for (const auto& s : c.sentences) {
    for (int j = 0; j < static_cast<int>(s.tokens.size()); ++j) {
      if (s.tokens[j].parses.size() != 1) continue;
      FeatureStructure fmasked = masks.apply(s.tokens[j].parses[0].fs, ContextPosition::Focus);
      std::string fkey = fmasked.canonical_key();
      t.add_cnt(fkey, 1);
      if (fmasked.derived()) t.add_cnt(fmasked.stem()->canonical_key(), 1);

      bool l1 = is_unamb(s, j - 1), l2 = is_unamb(s, j - 2);
      bool r1 = is_unamb(s, j + 1), r2 = is_unamb(s, j + 2);
      std::string kllc = l2 ? key_at(s, j - 2, ContextPosition::Llc) : "";
      std::string klc = l1 ? key_at(s, j - 1, ContextPosition::Lc) : "";
      std::string krc = r1 ? key_at(s, j + 1, ContextPosition::Rc) : "";
      std::string krrc = r2 ? key_at(s, j + 2, ContextPosition::Rrc) : "";
      std::string kstem = r1 ? rc_stem_key(s, j + 1) : "";

      auto add = [&](ContextShape shape, const std::string& a, const std::string& b,
                     const std::string& rc, const std::string& d) {
        ContextKey k;
        k.shape = shape;
        k.llc = a;
        k.lc = b;
        k.rc = rc;
        k.rrc = d;
        t.add_inc(k.serial(), fkey, 1);
      };
      auto add_rc_variants = [&](ContextShape shape, const std::string& a, const std::string& b,
                                 const std::string& d) {
        add(shape, a, b, krc, d);
        if (!kstem.empty()) add(shape, a, b, kstem, d);
      };
      if (l2 && l1 && r1 && r2) add_rc_variants(ContextShape::L2R2, kllc, klc, krrc);
      if (l2 && l1) add(ContextShape::L2, kllc, klc, "", "");
      if (r1 && r2) add_rc_variants(ContextShape::R2, "", "", krrc);
      if (l1 && r1) add_rc_variants(ContextShape::L1R1, "", klc, "");
      if (l1) add(ContextShape::L1, "", klc, "", "");
      if (r1) add_rc_variants(ContextShape::R1, "", "", "");
    }
  }
  return t;
}

Corpus random_learning_corpus(Rng& rng, int sentences) {
  // small vocabulary over shared shapes so keys pool
  std::vector<std::string> unambs = {
      "[[CAT NOUN][ROOT n1][AGR 3SG][POSS NONE][CASE NOM]]",
      "[[CAT NOUN][ROOT n2][AGR 3SG][POSS NONE][CASE ACC]]",
      "[[CAT VERB][ROOT v1][SENSE POS][TAM1 PAST][AGR 3SG]]",
      "[[CAT CONN][ROOT ve]]",
      "[[CAT NOUN][ROOT m][AGR 3SG][POSS NONE][CASE NOM][CONV VERB NONE][TAM1 PRES][AGR 3SG]]",
  };
  Corpus c;
  for (int s = 0; s < sentences; ++s) {
    Sentence sent;
    int n = 2 + rng.below(6);
    for (int t = 0; t < n; ++t) {
      if (rng.chance(60)) {
        sent.tokens.push_back(
            unamb("u", unambs[rng.below(static_cast<int>(unambs.size()))]));
      } else {
        Token tok;
        tok.surface = "a";
        int np = 2 + rng.below(2);
        for (int p = 0; p < np; ++p) {
          FeatureStructure fs =
              parse_fs(unambs[(p + rng.below(static_cast<int>(unambs.size()))) %
                              unambs.size()]);
          bool dup = false;
          for (const auto& e : tok.parses)
            if (e.fs == fs) dup = true;
          if (!dup) tok.parses.emplace_back(std::move(fs));
        }
        sent.tokens.push_back(std::move(tok));
      }
    }
    c.sentences.push_back(std::move(sent));
  }
  return c;
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("tables on three unambiguous tokens") {
  Corpus c;
  Sentence s;
  s.tokens.push_back(unamb("a", "[[CAT NOUN][ROOT a][CASE NOM]]"));
  s.tokens.push_back(unamb("b", "[[CAT VERB][ROOT b][TAM1 PAST]]"));
  s.tokens.push_back(unamb("c", "[[CAT NOUN][ROOT c][CASE ACC]]"));
  c.sentences.push_back(s);

  RelevanceMask masks;
  StatTables t = build_tables(c, masks);
  CHECK(t.count.size() == 3);
  for (const auto& [k, v] : t.count) CHECK(v == 1);

  ContextKey l1r1;
  l1r1.shape = ContextShape::L1R1;
  l1r1.lc = s.tokens[0].parses[0].fs.canonical_key();
  l1r1.rc = s.tokens[2].parses[0].fs.canonical_key();
  CHECK(t.inc(l1r1.serial(), s.tokens[1].parses[0].fs.canonical_key()) == 1);
}

TEST_CASE("identical masked contexts accumulate counts") {
  Corpus c;
  for (int i = 0; i < 2; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("a", "[[CAT NOUN][ROOT a][CASE NOM]]"));
    s.tokens.push_back(unamb("b", "[[CAT VERB][ROOT b][TAM1 PAST]]"));
    s.tokens.push_back(unamb("c", "[[CAT NOUN][ROOT c][CASE ACC]]"));
    c.sentences.push_back(s);
  }
  RelevanceMask masks;
  StatTables t = build_tables(c, masks);
  ContextKey l1r1;
  l1r1.shape = ContextShape::L1R1;
  l1r1.lc = c.sentences[0].tokens[0].parses[0].fs.canonical_key();
  l1r1.rc = c.sentences[0].tokens[2].parses[0].fs.canonical_key();
  CHECK(t.inc(l1r1.serial(), c.sentences[0].tokens[1].parses[0].fs.canonical_key()) == 2);
  CHECK(t.cnt(c.sentences[0].tokens[1].parses[0].fs.canonical_key()) == 2);
}

TEST_CASE("derived rc tokens are entered twice in both tables") {
  Corpus c;
  Sentence s;
  s.tokens.push_back(unamb("bir", "[[CAT ADJ][ROOT bir][TYPE DETERMINER]]"));
  s.tokens.push_back(unamb("masadir",
                           "[[CAT NOUN][ROOT masa][AGR 3SG][POSS NONE][CASE NOM]"
                           "[CONV VERB NONE][TAM1 PRES][AGR 3SG]]"));
  c.sentences.push_back(s);
  RelevanceMask masks;
  StatTables t = build_tables(c, masks);

  const FeatureStructure& derived = s.tokens[1].parses[0].fs;
  CHECK(t.cnt(derived.canonical_key()) == 1);
  CHECK(t.cnt(derived.stem()->canonical_key()) == 1);

  // the determiner's R1 context exists with both the top and the stem key
  ContextKey top;
  top.shape = ContextShape::R1;
  top.rc = derived.canonical_key();
  ContextKey stem = top;
  stem.rc = derived.stem()->canonical_key();
  std::string fkey = s.tokens[0].parses[0].fs.canonical_key();
  CHECK(t.inc(top.serial(), fkey) == 1);
  CHECK(t.inc(stem.serial(), fkey) == 1);
}

TEST_CASE("build_tables matches the brute-force oracle on random corpora") {
  Rng rng(51);
  RelevanceMask masks =
      RelevanceMask::parse_text("llc: CASE POSS\nlc: POSS\nrc: CASE\nrrc: CASE\n");
  for (int i = 0; i < 40; ++i) {
    Corpus c = random_learning_corpus(rng, 4);
    CHECK(build_tables(c, masks) == oracle_tables(c, masks));
    RelevanceMask nomask;
    CHECK(build_tables(c, nomask) == oracle_tables(c, nomask));
  }
}

TEST_CASE("score_candidate arithmetic") {
  StatTables t;
  ContextKey ctx;
  ctx.shape = ContextShape::L1;
  ctx.lc = "K";
  std::string C = ctx.serial();

  SUBCASE("worked example") {
    t.add_inc(C, "P1", 6);
    t.add_cnt("P1", 10);
    t.add_inc(C, "P2", 2);
    t.add_cnt("P2", 5);
    CHECK(score_candidate(C, "P1", {"P2"}, t) == 2.0);
  }
  SUBCASE("empty competition returns inc") {
    t.add_inc(C, "P1", 6);
    t.add_cnt("P1", 10);
    t.add_cnt("P2", 5);  // competitor never in this context
    CHECK(score_candidate(C, "P1", {"P2"}, t) == 6.0);
    CHECK(score_candidate(C, "P1", {}, t) == 6.0);
  }
  SUBCASE("argmax uses the weighted product, not raw inc") {
    t.add_inc(C, "P1", 6);
    t.add_cnt("P1", 10);
    t.add_inc(C, "P2", 5);
    t.add_cnt("P2", 100);  // v = 10/100*5 = 0.5
    t.add_inc(C, "P3", 1);
    t.add_cnt("P3", 2);  // v = 10/2*1 = 5  <- Pmax despite smaller inc
    CHECK(score_candidate(C, "P1", {"P2", "P3"}, t) == 1.0);
  }
  SUBCASE("cnt of the candidate smooths to 1") {
    t.add_inc(C, "P1", 3);
    t.add_inc(C, "P2", 4);
    t.add_cnt("P2", 2);  // v = 1/2*4 = 2
    CHECK(score_candidate(C, "P1", {"P2"}, t) == 1.0);
  }
  SUBCASE("brute-force competitor enumeration agrees") {
    Rng rng(52);
    for (int i = 0; i < 2000; ++i) {
      StatTables tt;
      std::set<std::string> comp;
      int n = 1 + rng.below(5);
      for (int k = 0; k < n; ++k) {
        std::string p = "Q" + std::to_string(k);
        if (rng.chance(80)) tt.add_cnt(p, 1 + rng.below(20));
        if (rng.chance(70)) tt.add_inc(C, p, rng.below(10) + 1);
        if (k > 0) comp.insert(p);
      }
      double got = score_candidate(C, "Q0", comp, tt);
      // oracle: direct evaluation with explicit argmax
      double cnt_pi = tt.cnt("Q0") > 0 ? static_cast<double>(tt.cnt("Q0")) : 1.0;
      double best = -1;
      std::string pmax;
      for (const auto& pj : comp) {
        if (tt.cnt(pj) <= 0) continue;
        double v = cnt_pi / static_cast<double>(tt.cnt(pj)) *
                   static_cast<double>(tt.inc(C, pj));
        if (v > best) {
          best = v;
          pmax = pj;
        }
      }
      double want;
      if (pmax.empty() || tt.inc(C, pmax) <= 0) {
        want = static_cast<double>(tt.inc(C, "Q0"));
      } else {
        want = static_cast<double>(tt.inc(C, "Q0")) -
               cnt_pi / static_cast<double>(tt.cnt(pmax)) *
                   static_cast<double>(tt.inc(C, pmax));
      }
      CHECK(got == want);
    }
  }
}

TEST_CASE("more specific rank wins even against a higher less-specific score") {
  Corpus c;
  // five evidence sentences for a full (llc,lc--rc,rrc) context
  for (int i = 0; i < 5; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("u1", "[[CAT ADJ][ROOT u1][TYPE QUAL]]"));
    s.tokens.push_back(unamb("u2", "[[CAT CONN][ROOT u2]]"));
    s.tokens.push_back(unamb("g", "[[CAT NOUN][ROOT g][CASE NOM]]"));
    s.tokens.push_back(unamb("u3", "[[CAT POSTP][ROOT u3][SUBCAT NOM]]"));
    s.tokens.push_back(unamb("u4", "[[CAT VERB][ROOT u4][TAM1 PAST]]"));
    c.sentences.push_back(s);
  }
  {  // one ambiguous site in that context -> rank-1 candidate, score 5
    Sentence s;
    s.tokens.push_back(unamb("u1", "[[CAT ADJ][ROOT u1][TYPE QUAL]]"));
    s.tokens.push_back(unamb("u2", "[[CAT CONN][ROOT u2]]"));
    s.tokens.push_back(make_token("amb", {parse_fs("[[CAT NOUN][ROOT g][CASE NOM]]"),
                                          parse_fs("[[CAT ADVERB][ROOT g]]")}));
    s.tokens.push_back(unamb("u3", "[[CAT POSTP][ROOT u3][SUBCAT NOM]]"));
    s.tokens.push_back(unamb("u4", "[[CAT VERB][ROOT u4][TAM1 PAST]]"));
    c.sentences.push_back(s);
  }
  // fifty evidence sentences for a single-lc context, far higher score
  for (int i = 0; i < 50; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("hh", "[[CAT NOUN][ROOT hh][CASE ACC]]"));
    s.tokens.push_back(unamb("gg", "[[CAT NOUN][ROOT gg][CASE DAT]]"));
    c.sentences.push_back(s);
  }
  {  // ambiguous site for the lc-only context
    Sentence s;
    s.tokens.push_back(unamb("hh", "[[CAT NOUN][ROOT hh][CASE ACC]]"));
    s.tokens.push_back(make_token("amb2", {parse_fs("[[CAT NOUN][ROOT gg][CASE DAT]]"),
                                           parse_fs("[[CAT VERB][ROOT gg][TAM1 PAST]]")}));
    c.sentences.push_back(s);
  }

  ThresholdSchedule sched;  // 4, 6, 9, 13
  ChooseLearner learner(c, sched, RelevanceMask());
  std::optional<LearnedRule> first = learner.iterate();
  REQUIRE(first.has_value());
  CHECK(first->rule.specificity() == 1);
  CHECK(first->score >= 4);
}

TEST_CASE("incremental tables equal a rebuild after every application") {
  Rng rng(53);
  RelevanceMask masks = RelevanceMask::parse_text("llc: CASE\nrc: CASE\nrrc: CASE\n");
  for (int run = 0; run < 10; ++run) {
    Corpus c = random_learning_corpus(rng, 6);
    ThresholdSchedule sched;
    sched.rank = {1, 1, 1, 1};
    sched.stop_limit = 100;  // stop as soon as nothing qualifies
    ChooseLearner learner(c, sched, masks);
    int checks = 0;
    learner.after_update = [&](const Corpus& cur, const StatTables& tables) {
      CHECK(tables == build_tables(cur, masks));
      ++checks;
    };
    while (auto r = learner.iterate()) {
    }
    CHECK(learner.tables() == build_tables(learner.corpus(), masks));
    (void)checks;
  }
}

TEST_CASE("fully ambiguous corpus terminates immediately with a diagnostic") {
  Corpus c;
  Sentence s;
  for (int i = 0; i < 4; ++i)
    s.tokens.push_back(make_token("w", {parse_fs("[[CAT NOUN][ROOT w][CASE NOM]]"),
                                        parse_fs("[[CAT VERB][ROOT w][TAM1 PAST]]")}));
  c.sentences.push_back(s);

  ChooseLearnResult r =
      learn_choose(c, {}, {}, ThresholdSchedule(), RelevanceMask(), ProjectionTemplate::identity());
  CHECK(r.rules.empty());
  CHECK(r.damping_rounds == 0);
  CHECK(!r.diagnostic.empty());
  CHECK(r.diagnostic.find("unambiguous contexts") != std::string::npos);
}

TEST_CASE("fully unambiguous corpus learns nothing, no diagnostic") {
  Corpus c;
  Sentence s;
  s.tokens.push_back(unamb("a", "[[CAT NOUN][ROOT a][CASE NOM]]"));
  s.tokens.push_back(unamb("b", "[[CAT VERB][ROOT b][TAM1 PAST]]"));
  c.sentences.push_back(s);
  ChooseLearnResult r =
      learn_choose(c, {}, {}, ThresholdSchedule(), RelevanceMask(), ProjectionTemplate::identity());
  CHECK(r.rules.empty());
  CHECK(r.diagnostic.empty());
}

TEST_CASE("damping rounds follow the closed-form bound") {
  // one low-scoring candidate; thresholds start above the stop limit
  Corpus c;
  Sentence s;
  s.tokens.push_back(unamb("t", "[[CAT CONN][ROOT t]]"));
  s.tokens.push_back(make_token("amb", {parse_fs("[[CAT NOUN][ROOT a][CASE NOM]]"),
                                        parse_fs("[[CAT VERB][ROOT a][TAM1 PAST]]")}));
  c.sentences.push_back(s);
  Sentence ev;
  ev.tokens.push_back(unamb("t", "[[CAT CONN][ROOT t]]"));
  ev.tokens.push_back(unamb("g", "[[CAT NOUN][ROOT g2][CASE NOM]]"));
  c.sentences.push_back(ev);  // scores stay at ~1-2, far below 7*0.9

  ThresholdSchedule sched;
  sched.rank = {40, 60, 90, 130};
  sched.damping = 0.9;
  sched.stop_limit = 7;
  ChooseLearnResult r =
      learn_choose(c, {}, {}, sched, RelevanceMask(), ProjectionTemplate::identity());
  CHECK(r.rules.empty());
  int expected = static_cast<int>(std::ceil(std::log(7.0 / 40.0) / std::log(0.9)));
  CHECK(expected == 17);
  CHECK(r.damping_rounds == expected);
}

TEST_CASE("learning is deterministic") {
  Rng rng(54);
  Corpus c = random_learning_corpus(rng, 20);
  ThresholdSchedule sched;
  sched.rank = {1, 1, 1, 2};
  sched.stop_limit = 10;
  std::ostringstream log1, log2;
  ChooseLearnResult a =
      learn_choose(c, {}, {}, sched, RelevanceMask(), ProjectionTemplate::identity(), &log1);
  ChooseLearnResult b =
      learn_choose(c, {}, {}, sched, RelevanceMask(), ProjectionTemplate::identity(), &log2);
  CHECK(log1.str() == log2.str());
  REQUIRE(a.rules.size() == b.rules.size());
  for (size_t i = 0; i < a.rules.size(); ++i)
    CHECK(a.rules[i].rule.to_text() == b.rules[i].rule.to_text());
}

TEST_CASE("learned choose rules replay their own evidence") {
  Rng rng(55);
  Corpus c = random_learning_corpus(rng, 25);
  ThresholdSchedule sched;
  sched.rank = {1, 1, 1, 2};
  sched.stop_limit = 10;
  ChooseLearner learner(c, sched, RelevanceMask());
  std::vector<Rule> rules;
  while (auto r = learner.iterate()) rules.push_back(r->rule);

  Corpus replay = c;
  run_pass(replay, rules, ApplyOptions::learned());
  // every token the learner made unambiguous still carries that parse
  for (size_t si = 0; si < replay.sentences.size(); ++si) {
    for (size_t ti = 0; ti < replay.sentences[si].tokens.size(); ++ti) {
      const Token& fin = learner.corpus().sentences[si].tokens[ti];
      if (!fin.unambiguous()) continue;
      bool present = false;
      for (const auto& p : replay.sentences[si].tokens[ti].parses)
        if (p.fs == fin.parses[0].fs) present = true;
      CHECK(present);
    }
  }
}

TEST_CASE("delete learning emits rules for parses far below the best score") {
  Corpus c;
  auto add_pair = [&](const char* a, const char* b) {
    Sentence s;
    s.tokens.push_back(unamb("t", a));
    s.tokens.push_back(unamb("x", b));
    c.sentences.push_back(s);
  };
  const char* trig = "[[CAT CONN][ROOT t]]";
  const char* p1 = "[[CAT NOUN][ROOT p][CASE NOM]]";
  const char* p2 = "[[CAT VERB][ROOT p][TAM1 PAST]]";
  // P1: cnt 4, inc(C)=2 -> 0.5 ; P2: cnt 25, inc(C)=2 -> 0.08 < 0.2*0.5
  add_pair(trig, p1);
  add_pair(trig, p1);
  add_pair(trig, p2);
  add_pair(trig, p2);
  {
    Sentence s;
    s.tokens.push_back(unamb("x", p1));
    s.tokens.push_back(unamb("x", p1));
    c.sentences.push_back(s);
  }
  for (int i = 0; i < 23; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("x", p2));
    c.sentences.push_back(s);
  }
  {  // the still-ambiguous token in context C
    Sentence s;
    s.tokens.push_back(unamb("t", trig));
    s.tokens.push_back(make_token("amb", {parse_fs(p1), parse_fs(p2)}));
    c.sentences.push_back(s);
  }

  DeleteLearnConfig cfg;
  cfg.fraction = 0.2;
  cfg.templates = ProjectionTemplate::identity();
  std::vector<LearnedRule> rules = learn_delete(c, {}, {}, {}, cfg, RelevanceMask());

  std::string p1key = parse_fs(p1).canonical_key();
  std::string p2key = parse_fs(p2).canonical_key();
  bool deletes_p2 = false, deletes_p1 = false;
  FeatureStructure trig_fs = parse_fs(trig);
  for (const auto& lr : rules) {
    if (!lr.rule.lc || !lr.rule.lc->subsumes(trig_fs) || lr.rule.rc) continue;
    if (lr.rule.target.subsumes(parse_fs(p2))) deletes_p2 = true;
    if (lr.rule.target.subsumes(parse_fs(p1))) deletes_p1 = true;
  }
  CHECK(deletes_p2);
  CHECK_FALSE(deletes_p1);
}

TEST_CASE("delete learning: close scores and single-parse tokens yield nothing") {
  Corpus c;
  const char* trig = "[[CAT CONN][ROOT t]]";
  const char* p1 = "[[CAT NOUN][ROOT p][CASE NOM]]";
  const char* p2 = "[[CAT VERB][ROOT p][TAM1 PAST]]";
  // scores 0.5 and 0.4: no rule
  for (int i = 0; i < 5; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("t", trig));
    s.tokens.push_back(unamb("x", i < 2 ? p1 : p2));  // inc: p1=2, p2=3
    c.sentences.push_back(s);
  }
  // counts: p1 total 4 (0.5), p2 total 7 (3/7 = 0.43)
  {
    Sentence s;
    s.tokens.push_back(unamb("x", p1));
    s.tokens.push_back(unamb("x", p1));
    c.sentences.push_back(s);
  }
  for (int i = 0; i < 4; ++i) {
    Sentence s;
    s.tokens.push_back(unamb("x", p2));
    c.sentences.push_back(s);
  }
  {
    Sentence s;
    s.tokens.push_back(unamb("t", trig));
    s.tokens.push_back(make_token("amb", {parse_fs(p1), parse_fs(p2)}));
    c.sentences.push_back(s);
  }
  DeleteLearnConfig cfg;
  cfg.templates = ProjectionTemplate::identity();
  std::vector<LearnedRule> rules = learn_delete(c, {}, {}, {}, cfg, RelevanceMask());
  FeatureStructure trig_fs = parse_fs(trig);
  for (const auto& lr : rules) {
    bool lc_is_trig = lr.rule.lc && lr.rule.lc->subsumes(trig_fs) && !lr.rule.rc;
    CHECK_FALSE(lc_is_trig);
  }

  Corpus single;
  Sentence s;
  s.tokens.push_back(unamb("a", p1));
  s.tokens.push_back(unamb("b", p2));
  single.sentences.push_back(s);
  CHECK(learn_delete(single, {}, {}, {}, cfg, RelevanceMask()).empty());
}

}  // TEST_SUITE
