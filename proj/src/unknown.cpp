#include "morphdis/unknown.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "textutil.hpp"

namespace morphdis {

void SuffixLexicon::add(SuffixRule rule) {
  if (rule.form.empty()) throw FormatError("suffix allomorph must be non-empty");
  rules_.push_back(std::move(rule));
}

void SuffixLexicon::add_order(const std::string& before, const std::string& after) {
  follows_[before].insert(after);
  // keep the closure transitive
  for (auto& [cls, nexts] : follows_) {
    if (cls == before || nexts.count(before)) {
      nexts.insert(after);
      auto it = follows_.find(after);
      if (it != follows_.end()) nexts.insert(it->second.begin(), it->second.end());
    }
  }
  auto it = follows_.find(after);
  if (it != follows_.end()) follows_[before].insert(it->second.begin(), it->second.end());
  check_acyclic();
}

void SuffixLexicon::check_acyclic() const {
  for (const auto& [cls, nexts] : follows_)
    if (nexts.count(cls)) throw FormatError("suffix class order is cyclic at '" + cls + "'");
}

bool SuffixLexicon::class_precedes(const std::string& a, const std::string& b) const {
  auto it = follows_.find(a);
  return it != follows_.end() && it->second.count(b) > 0;
}

SuffixLexicon SuffixLexicon::parse_text(std::string_view text, const std::string& file) {
  SuffixLexicon lex;
  long lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.find('\t') == std::string_view::npos) {
      size_t lt = body.find('<');
      if (lt == std::string_view::npos)
        throw FormatError("expected 'form TAB class TAB effects' or 'class < class'", file,
                          lineno);
      std::string before = to_upper(trim(body.substr(0, lt)));
      std::string after = to_upper(trim(body.substr(lt + 1)));
      if (before.empty() || after.empty())
        throw FormatError("malformed class order line", file, lineno);
      lex.add_order(before, after);
      continue;
    }
    auto fields = split(body, '\t');
    if (fields.size() < 2) throw FormatError("suffix line needs form and class", file, lineno);
    SuffixRule rule;
    rule.form = std::string(trim(fields[0]));
    rule.cls = to_upper(trim(fields[1]));
    if (fields.size() > 2) {
      for (std::string_view tok : split_ws(fields[2])) {
        size_t eq = tok.find('=');
        if (eq == std::string_view::npos)
          throw FormatError("suffix effect needs feature=value", file, lineno);
        LinearEntry e;
        e.name = to_upper(trim(tok.substr(0, eq)));
        std::string_view val = trim(tok.substr(eq + 1));
        if (e.name == kConv) {
          size_t colon = val.find(':');
          if (colon == std::string_view::npos)
            throw FormatError("CONV effect needs CAT:SUFFIX", file, lineno);
          e.value = std::string(trim(val.substr(0, colon)));
          e.extra = std::string(trim(val.substr(colon + 1)));
        } else {
          e.value = std::string(val);
        }
        rule.effects.push_back(std::move(e));
      }
    }
    lex.add(std::move(rule));
  }
  return lex;
}

SuffixLexicon SuffixLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open suffix lexicon", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

namespace {

// Vowel backness under the ASCII convention for Turkish special letters
// (I = dotless i, O = o-umlaut, U = u-umlaut): +1 back, -1 front, 0 none.
int vowel_class(char c) {
  switch (c) {
    case 'a': case 'o': case 'u': case 'I': return 1;
    case 'e': case 'i': case 'O': case 'U': return -1;
    default: return 0;
  }
}

int last_vowel(std::string_view s) {
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    if (int v = vowel_class(*it)) return v;
  return 0;
}

int first_vowel(std::string_view s) {
  for (char c : s)
    if (int v = vowel_class(c)) return v;
  return 0;
}

bool harmonious(std::string_view prev, std::string_view next) {
  int a = last_vowel(prev), b = first_vowel(next);
  return a == 0 || b == 0 || a == b;
}

struct Chain {
  std::vector<const SuffixRule*> suffixes;
};

// All ways to read `tail` as a valid suffix chain continuing `prev`.
void expand(std::string_view tail, const SuffixLexicon& lex, const SuffixRule* prev,
            Chain& chain, std::vector<Chain>& out) {
  if (tail.empty()) {
    out.push_back(chain);
    return;
  }
  for (const SuffixRule& r : lex.rules()) {
    if (tail.substr(0, r.form.size()) != r.form) continue;
    if (prev) {
      if (!lex.class_precedes(prev->cls, r.cls)) continue;
      if (lex.harmony() && !harmonious(prev->form, r.form)) continue;
    }
    chain.suffixes.push_back(&r);
    expand(tail.substr(r.form.size()), lex, &r, chain, out);
    chain.suffixes.pop_back();
  }
}

FeatureStructure nominal_reading(std::string_view root, const Chain& chain) {
  LinearParse p;
  auto push = [&p](const char* n, std::string v) {
    p.entries.push_back(LinearEntry{n, std::move(v), {}});
  };
  push(kCat, "NOUN");
  push(kRoot, std::string(root));
  push("AGR", "3SG");
  push("POSS", "NONE");
  push("CASE", "NOM");

  FeatureStructure fs = hierarchize(p);
  FeatureStructure* level = &fs;
  for (const SuffixRule* s : chain.suffixes) {
    for (const LinearEntry& e : s->effects) {
      if (e.is_conv()) {
        FeatureStructure outer;
        outer.set(kCat, e.value);
        outer.set(kSuffix, e.extra);
        outer.set_stem(std::move(*level));
        *level = std::move(outer);
      } else {
        level->set(e.name, e.value);
      }
    }
  }
  return fs;
}

}  // namespace

std::vector<FeatureStructure> guess(std::string_view surface, const SuffixLexicon& lex) {
  std::vector<FeatureStructure> out;
  std::set<std::string> seen;
  auto emit = [&](FeatureStructure fs) {
    std::string key = fs.canonical_key();
    if (seen.insert(key).second) out.push_back(std::move(fs));
  };
  if (surface.empty()) return out;

  // Longest root first; root length >= 1.
  for (size_t rootlen = surface.size(); rootlen >= 1; --rootlen) {
    std::string_view root = surface.substr(0, rootlen);
    std::string_view tail = surface.substr(rootlen);
    if (tail.empty()) {
      emit(nominal_reading(root, Chain{}));
      continue;
    }
    std::vector<Chain> chains;
    Chain scratch;
    expand(tail, lex, nullptr, scratch, chains);
    for (const Chain& c : chains) emit(nominal_reading(root, c));
  }
  return out;
}

}  // namespace morphdis
