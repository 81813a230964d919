#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "morphdis/featstruct.hpp"

namespace morphdis {

// One suffix allomorph with the features it contributes to the analysis.
// A CONV effect (name CONV, value = target category, extra = suffix label)
// opens a new derivation level; the other effects set features on the
// current level.
struct SuffixRule {
  std::string form;
  std::string cls;
  std::vector<LinearEntry> effects;
};

// Suffix inventory plus a morphotactic order over suffix classes. A chain
// s1...sn is valid when class(s1) < class(s2) < ... under the (acyclic,
// transitively closed) order, i.e. at most one suffix per class.
class SuffixLexicon {
 public:
  // Two line forms:
  //   form TAB class TAB feature=value [feature=value ...]
  //   class < class
  static SuffixLexicon parse_text(std::string_view text, const std::string& file = {});
  static SuffixLexicon load_file(const std::string& path);

  void add(SuffixRule rule);
  void add_order(const std::string& before, const std::string& after);
  void set_harmony(bool on) { harmony_ = on; }

  bool harmony() const { return harmony_; }
  bool empty() const { return rules_.empty(); }
  const std::vector<SuffixRule>& rules() const { return rules_; }
  // True iff class b may follow class a.
  bool class_precedes(const std::string& a, const std::string& b) const;

 private:
  void check_acyclic() const;

  std::vector<SuffixRule> rules_;
  std::map<std::string, std::set<std::string>> follows_;  // transitive closure
  bool harmony_ = true;
};

// Nominal hypotheses for a surface form with no analyses: every
// segmentation surface = root . s1 ... sn (root non-empty) with a valid
// suffix chain yields one parse with CAT NOUN and ROOT root; the bare-root
// reading (AGR 3SG, POSS NONE, CASE NOM) is always present. Duplicates are
// removed; order is longest root first.
std::vector<FeatureStructure> guess(std::string_view surface, const SuffixLexicon& lex);

}  // namespace morphdis
