#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "morphdis/error.hpp"

namespace morphdis {

class FeatureStructure;
using FeatPtr = std::shared_ptr<const FeatureStructure>;

// Reserved feature names and category values.
inline constexpr const char* kCat = "CAT";
inline constexpr const char* kRoot = "ROOT";
inline constexpr const char* kStem = "STEM";
inline constexpr const char* kSuffix = "SUFFIX";
inline constexpr const char* kConv = "CONV";
inline constexpr const char* kBoundaryCat = "BOUNDARY";
inline constexpr const char* kUnknownCat = "UNKNOWN";

// One morphological parse as a hierarchical attribute-value record.
// Values are atomic symbols, except under STEM which nests the record of
// the derivational stem. Treated as immutable once built; equality is
// structural and ignores insertion order.
class FeatureStructure {
 public:
  using Value = std::variant<std::string, FeatPtr>;

  FeatureStructure() = default;

  // Sets a feature, replacing any previous value under the same name.
  void set(const std::string& name, std::string atom);
  void set_stem(FeatureStructure stem);
  void set_stem(FeatPtr stem);
  // Adds a feature that must not already exist at this level.
  void add_unique(const std::string& name, std::string atom);

  bool has(std::string_view name) const;
  // Atomic value of a feature, or nullptr when absent or nested.
  const std::string* atom(std::string_view name) const;
  const FeatureStructure* stem() const;
  bool derived() const { return stem() != nullptr; }
  bool empty() const { return feats_.empty(); }
  // Number of STEM levels below this one (0 for a single-level structure).
  int depth() const;

  const std::vector<std::pair<std::string, Value>>& features() const { return feats_; }

  // Deterministic serialization with features sorted by name at every
  // level. Two structures are structurally equal iff their keys are equal.
  std::string canonical_key() const;

  bool operator==(const FeatureStructure& other) const;
  bool operator!=(const FeatureStructure& other) const { return !(*this == other); }

 private:
  std::vector<std::pair<std::string, Value>> feats_;
};

// The parse for a virtual sentence-boundary position: [CAT BOUNDARY].
const FeatureStructure& boundary_parse();

// One entry of a linear (flat) parse. CONV entries carry the target
// category in `value` and the suffix label in `extra`.
struct LinearEntry {
  std::string name;
  std::string value;
  std::string extra;

  bool is_conv() const { return name == kConv; }
};

// A parse as emitted by a morphological analyzer: a flat sequence of
// feature entries, e.g. [[CAT VERB][ROOT gel][SENSE POS][CONV ADJ REL]].
struct LinearParse {
  std::vector<LinearEntry> entries;

  std::string to_text() const;
  // Parses "[[NAME VALUE]...]" text. Validates that the parse starts with
  // CAT and ROOT entries and that CONV entries carry both values.
  static LinearParse parse_text(std::string_view text, const std::string& file = {},
                                long line = 0);
};

// Builds the hierarchical structure: each CONV entry opens a new outer
// level whose CAT is the CONV target, whose SUFFIX is the CONV label and
// whose STEM is the structure built so far.
FeatureStructure hierarchize(const LinearParse& p);
// Inverse of hierarchize (up to structural equality).
LinearParse linearize(const FeatureStructure& f);

// A partial description of a parse: every feature optional, nesting only
// under STEM. The empty constraint subsumes every structure. Values parsed
// from text compare case-insensitively unless they were quoted.
class FeatureConstraint {
 public:
  struct Atom {
    std::string text;
    bool exact = false;  // quoted in the source text: byte-exact compare
  };

  FeatureConstraint() = default;

  void require(const std::string& name, std::string value, bool exact = false);
  void require_stem(FeatureConstraint stem);

  bool empty() const { return feats_.empty() && !stem_; }
  const std::vector<std::pair<std::string, Atom>>& features() const { return feats_; }
  const FeatureConstraint* stem() const { return stem_.get(); }

  // True iff every feature named here exists in f with a matching atomic
  // value, recursively for STEM.
  bool subsumes(const FeatureStructure& f) const;
  // True iff this constraint is at least as general as `other`: every
  // feature required here is required by `other` with a matching value.
  bool generalizes(const FeatureConstraint& other) const;
  // A virtual boundary position is matched only by an explicit
  // [cat:boundary] constraint, never by the empty constraint.
  bool matches_boundary() const;

  // Canonical serialization: sorted feature names, exact values quoted.
  std::string to_text() const;
  static FeatureConstraint parse_text(std::string_view text, const std::string& file = {},
                                      long line = 0);
  // Exact constraint listing every feature of f (stems become nested
  // constraints). Subsumes f by construction.
  static FeatureConstraint from_structure(const FeatureStructure& f);

 private:
  std::vector<std::pair<std::string, Atom>> feats_;
  std::shared_ptr<const FeatureConstraint> stem_;
};

// Per-category selection of the features kept when projecting a parse.
// The category's CAT feature is always kept; STEM is kept (and projected
// with the stem's own category rule) only when the rule says so.
class ProjectionTemplate {
 public:
  struct CategoryRule {
    std::set<std::string> keep;
    bool keep_stem = false;
  };

  // Keeps everything; apply() is the identity.
  static ProjectionTemplate identity();
  // One line per category: "CAT: FEAT FEAT ... [+stem]". A '*' category
  // line declares the fallback for categories not listed; without one,
  // unlisted categories keep all their features.
  static ProjectionTemplate parse_text(std::string_view text, const std::string& file = {});
  static ProjectionTemplate load_file(const std::string& path);

  void set_rule(const std::string& cat, CategoryRule rule);
  void set_fallback(CategoryRule rule);

  bool is_identity() const { return identity_; }
  FeatureStructure apply(const FeatureStructure& f) const;

 private:
  std::map<std::string, CategoryRule> by_cat_;
  std::optional<CategoryRule> fallback_;
  bool identity_ = false;
};

inline FeatureStructure project(const FeatureStructure& f, const ProjectionTemplate& t) {
  return t.apply(f);
}

// Context positions around a focus token.
enum class ContextPosition { Llc = 0, Lc = 1, Rc = 2, Rrc = 3, Focus = 4 };
inline constexpr int kContextPositions = 5;
const char* context_position_name(ContextPosition p);

// Feature names dropped per context position when forming context keys.
class RelevanceMask {
 public:
  // One line per position: "lc: FEAT FEAT ...". Unlisted positions drop
  // nothing.
  static RelevanceMask parse_text(std::string_view text, const std::string& file = {});
  static RelevanceMask load_file(const std::string& path);

  void drop(ContextPosition pos, const std::string& feature);
  const std::set<std::string>& dropped(ContextPosition pos) const;
  bool empty() const;

  // Removes the dropped features at every level of f.
  FeatureStructure apply(const FeatureStructure& f, ContextPosition pos) const;

 private:
  std::array<std::set<std::string>, kContextPositions> drop_;
};

}  // namespace morphdis
