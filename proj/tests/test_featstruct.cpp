#include <doctest.h>

#include "morphdis/featstruct.hpp"
#include "testutil.hpp"

using namespace morphdis;
using namespace morphdis::testutil;

namespace {

const char* kGeldigimdeki =
    "[[CAT VERB][ROOT gel][SENSE POS][CONV NOUN DIK][AGR 3SG][POSS 1SG][CASE LOC]"
    "[CONV ADJ REL]]";
const char* kMasaDir =
    "[[CAT NOUN][ROOT masa][AGR 3SG][POSS NONE][CASE NOM][CONV VERB NONE][TAM1 PRES]"
    "[AGR 3SG]]";

}  // namespace

TEST_SUITE("featstruct") {

TEST_CASE("hierarchize builds the derived adjective structure") {
  FeatureStructure f = parse_fs(kGeldigimdeki);

  CHECK(*f.atom(kCat) == "ADJ");
  CHECK(*f.atom(kSuffix) == "REL");
  REQUIRE(f.stem() != nullptr);
  const FeatureStructure& noun = *f.stem();
  CHECK(*noun.atom(kCat) == "NOUN");
  CHECK(*noun.atom("AGR") == "3SG");
  CHECK(*noun.atom("POSS") == "1SG");
  CHECK(*noun.atom("CASE") == "LOC");
  CHECK(*noun.atom(kSuffix) == "DIK");
  REQUIRE(noun.stem() != nullptr);
  const FeatureStructure& verb = *noun.stem();
  CHECK(*verb.atom(kCat) == "VERB");
  CHECK(*verb.atom(kRoot) == "gel");
  CHECK(*verb.atom("SENSE") == "POS");
  CHECK(verb.stem() == nullptr);
  CHECK(f.depth() == 2);
}

TEST_CASE("hierarchize builds the derived verb structure") {
  FeatureStructure f = parse_fs(kMasaDir);
  CHECK(*f.atom(kCat) == "VERB");
  CHECK(*f.atom("TAM1") == "PRES");
  CHECK(*f.atom("AGR") == "3SG");
  CHECK(*f.atom(kSuffix) == "NONE");
  REQUIRE(f.stem() != nullptr);
  CHECK(*f.stem()->atom(kCat) == "NOUN");
  CHECK(*f.stem()->atom(kRoot) == "masa");
  CHECK(f.stem()->stem() == nullptr);
}

TEST_CASE("parse with no CONV stays single level, no SUFFIX") {
  FeatureStructure f = parse_fs("[[CAT NOUN][ROOT oya][AGR 3SG][POSS NONE][CASE NOM]]");
  CHECK(f.depth() == 0);
  CHECK(!f.has(kSuffix));
  CHECK(f.features().size() == 5);
}

TEST_CASE("nesting depth equals the number of CONV entries") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    int convs = rng.below(4);
    std::string text = "[[CAT VERB][ROOT r][SENSE POS]";
    for (int k = 0; k < convs; ++k) text += "[CONV NOUN S" + std::to_string(k) + "][AGR 3SG]";
    text += "]";
    CHECK(parse_fs(text).depth() == convs);
  }
}

TEST_CASE("malformed CONV entry is a format error") {
  CHECK_THROWS_AS(LinearParse::parse_text("[[CAT VERB][ROOT gel][CONV NOUN]]"), FormatError);
  CHECK_THROWS_AS(LinearParse::parse_text("[[ROOT gel][CAT VERB]]"), FormatError);
  // duplicate feature within one level surfaces at hierarchization
  CHECK_THROWS_AS(parse_fs("[[CAT VERB][ROOT gel][AGR 3SG][AGR 3PL]]"), FormatError);
}

TEST_CASE("linearize inverts hierarchize") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    FeatureStructure f = random_structure(rng, 3);
    LinearParse lp = linearize(f);
    FeatureStructure back = hierarchize(lp);
    CHECK(back == f);
    CHECK(structural_equal_oracle(back, f));
  }
}

TEST_CASE("subsumption on the paper structures") {
  FeatureStructure gel = parse_fs(kGeldigimdeki);

  CHECK(FeatureConstraint().subsumes(gel));  // empty constraint subsumes everything
  FeatureConstraint c = FeatureConstraint::parse_text("[cat:adj,stem:[cat:noun]]");
  CHECK(c.subsumes(gel));
  FeatureConstraint wrong = FeatureConstraint::parse_text("[cat:noun,case:acc]");
  CHECK_FALSE(
      wrong.subsumes(parse_fs("[[CAT NOUN][ROOT oy][AGR 3SG][POSS NONE][CASE GEN]]")));
}

TEST_CASE("quoted constraint values compare exactly, unquoted case-insensitively") {
  FeatureStructure koS = parse_fs("[[CAT VERB][ROOT koS][SENSE POS]]");
  CHECK(FeatureConstraint::parse_text("[root:kos]").subsumes(koS));
  CHECK(FeatureConstraint::parse_text("[root:'koS']").subsumes(koS));
  CHECK_FALSE(FeatureConstraint::parse_text("[root:'kos']").subsumes(koS));
  CHECK(FeatureConstraint::parse_text("[poss:'NONE']")
            .subsumes(parse_fs("[[CAT NOUN][ROOT oy][POSS NONE]]")));
}

TEST_CASE("subsumption agrees with the brute-force oracle") {
  Rng rng(13);
  int positives = 0;
  for (int i = 0; i < 10000; ++i) {
    FeatureStructure f = random_structure(rng, 3);
    FeatureConstraint c = random_constraint_from(rng, f, rng.chance(50));
    bool got = c.subsumes(f);
    CHECK(got == subsumes_oracle(c, f));
    if (got) ++positives;
  }
  CHECK(positives > 100);  // both outcomes exercised
}

TEST_CASE("subsumption is reflexive and transitive through from_structure") {
  Rng rng(14);
  for (int i = 0; i < 300; ++i) {
    FeatureStructure f = random_structure(rng, 2);
    FeatureConstraint self = FeatureConstraint::from_structure(f);
    CHECK(self.subsumes(f));
    // dropping requirements keeps subsumption
    FeatureConstraint partial = random_constraint_from(rng, f, true);
    CHECK(partial.subsumes(f));
  }
}

TEST_CASE("projection reproduces the projected derived structure") {
  ProjectionTemplate t;
  t.set_rule("ADJ", {{"SUFFIX"}, true});
  t.set_rule("NOUN", {{"AGR", "POSS", "CASE", "SUFFIX"}, true});
  t.set_rule("VERB", {{}, false});

  FeatureStructure p = t.apply(parse_fs(kGeldigimdeki));
  CHECK(*p.atom(kCat) == "ADJ");
  CHECK(*p.atom(kSuffix) == "REL");
  REQUIRE(p.stem());
  const FeatureStructure& noun = *p.stem();
  CHECK(*noun.atom("AGR") == "3SG");
  CHECK(*noun.atom("POSS") == "1SG");
  CHECK(*noun.atom("CASE") == "LOC");
  CHECK(*noun.atom(kSuffix) == "DIK");
  CHECK(!noun.has(kRoot));
  REQUIRE(noun.stem());
  const FeatureStructure& verb = *noun.stem();
  CHECK(*verb.atom(kCat) == "VERB");
  CHECK(verb.features().size() == 1);  // everything but CAT dropped
}

TEST_CASE("identity template is the identity") {
  Rng rng(15);
  ProjectionTemplate t = ProjectionTemplate::identity();
  for (int i = 0; i < 200; ++i) {
    FeatureStructure f = random_structure(rng, 3);
    CHECK(t.apply(f) == f);
  }
}

TEST_CASE("projection is idempotent") {
  Rng rng(16);
  ProjectionTemplate t = ProjectionTemplate::parse_text(
      "NOUN: AGR POSS CASE SUFFIX +stem\nVERB: SENSE TAM1 +stem\nADJ: SUFFIX +stem\n*: AGR\n");
  for (int i = 0; i < 500; ++i) {
    FeatureStructure f = random_structure(rng, 3);
    FeatureStructure once = t.apply(f);
    CHECK(t.apply(once) == once);
  }
}

TEST_CASE("two parses differing only in dropped features project equally") {
  ProjectionTemplate t = ProjectionTemplate::parse_text("NOUN: AGR CASE\n");
  FeatureStructure a = parse_fs("[[CAT NOUN][ROOT oy][AGR 3SG][POSS NONE][CASE NOM]]");
  FeatureStructure b = parse_fs("[[CAT NOUN][ROOT oy][AGR 3SG][POSS 2SG][CASE NOM]]");
  CHECK(a != b);
  CHECK(t.apply(a) == t.apply(b));
}

TEST_CASE("canonical keys are insertion-order independent") {
  FeatureStructure a, b;
  a.set(kCat, "NOUN");
  a.set("AGR", "3SG");
  a.set("CASE", "NOM");
  b.set("CASE", "NOM");
  b.set(kCat, "NOUN");
  b.set("AGR", "3SG");
  CHECK(a.canonical_key() == b.canonical_key());
  CHECK(a == b);

  b.set("CASE", "ACC");
  CHECK(a.canonical_key() != b.canonical_key());
}

TEST_CASE("canonical key equality matches the structural oracle") {
  Rng rng(17);
  ProjectionTemplate t = ProjectionTemplate::parse_text("NOUN: AGR CASE +stem\n*: AGR\n");
  for (int i = 0; i < 1000; ++i) {
    FeatureStructure f = random_structure(rng, 3);
    FeatureStructure g = rng.chance(50) ? random_structure(rng, 3) : f;
    CHECK((f.canonical_key() == g.canonical_key()) == structural_equal_oracle(f, g));
    // a projection that drops some feature must change the key
    FeatureStructure p = t.apply(f);
    CHECK((p.canonical_key() == f.canonical_key()) == structural_equal_oracle(p, f));
  }
}

TEST_CASE("masks drop features per position at every level") {
  RelevanceMask m = RelevanceMask::parse_text("llc: CASE POSS\nlc: POSS\nrc: CASE\nrrc: CASE\n");
  FeatureStructure f = parse_fs(kGeldigimdeki);
  FeatureStructure left = m.apply(f, ContextPosition::Llc);
  CHECK(!left.stem()->has("CASE"));
  CHECK(!left.stem()->has("POSS"));
  FeatureStructure right = m.apply(f, ContextPosition::Rc);
  CHECK(!right.stem()->has("CASE"));
  CHECK(right.stem()->has("POSS"));
  CHECK(m.apply(f, ContextPosition::Focus) == f);  // focus drops nothing here
}

TEST_CASE("constraint text round-trips") {
  const char* texts[] = {
      "[case:abl]",
      "[cat:postp,subcat:abl]",
      "[cat:adj,stem:[cat:noun]]",
      "[agr:'2SG',case:gen]",
  };
  for (const char* t : texts) {
    FeatureConstraint c = FeatureConstraint::parse_text(t);
    FeatureConstraint back = FeatureConstraint::parse_text(c.to_text());
    CHECK(back.to_text() == c.to_text());
  }
  CHECK(FeatureConstraint::parse_text("[ ]").empty());
  CHECK_THROWS_AS(FeatureConstraint::parse_text("[cat:adj,agr:[cat:noun]]"), FormatError);
}

}  // TEST_SUITE
