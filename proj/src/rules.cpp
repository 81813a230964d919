#include "morphdis/rules.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include "textutil.hpp"

namespace morphdis {

int Rule::specificity() const {
  bool l2 = llc.has_value(), l1 = lc.has_value(), r1 = rc.has_value(), r2 = rrc.has_value();
  if (l2 && l1 && r1 && r2) return 1;
  if ((l2 && l1) || (r1 && r2)) return 2;
  if (l1 && r1) return 3;
  return 4;
}

void Rule::validate() const {
  if (target.empty()) throw FormatError("rule target constraint must be non-empty");
  if (!llc && !lc && !rc && !rrc)
    throw FormatError("rule must constrain at least one context position");
}

namespace {

std::string ctx_text(const std::optional<FeatureConstraint>& c) {
  return c ? "[" + c->to_text() + "]" : "[ ]";
}

}  // namespace

std::string Rule::to_text() const {
  std::string out = "[llc:" + ctx_text(llc) + ",lc:" + ctx_text(lc) + ",";
  out += action == RuleAction::Choose ? "choose:" : "delete:";
  out += target.to_text();
  out += ",rc:" + ctx_text(rc) + ",rrc:" + ctx_text(rrc) + "]";
  return out;
}

namespace {

// Consumes "name:" then either an absent context "[ ]" or "[ constraint ]".
std::optional<FeatureConstraint> parse_ctx(std::string_view text, size_t& i,
                                           const std::string& file, long line) {
  auto fail = [&](const std::string& m) -> void { throw FormatError(m, file, line); };
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '[') fail("expected '[' opening a context");
  ++i;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == ']') {
    ++i;
    return std::nullopt;
  }
  // bracketed constraint, then the closing context bracket
  size_t start = i;
  int depth = 0;
  bool quoted = false;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (quoted) {
      if (ch == '\'') quoted = false;
      continue;
    }
    if (ch == '\'') quoted = true;
    else if (ch == '[') ++depth;
    else if (ch == ']') {
      if (depth == 0) break;
      --depth;
    }
  }
  if (i >= text.size()) fail("unterminated context");
  FeatureConstraint c =
      FeatureConstraint::parse_text(trim(text.substr(start, i - start)), file, line);
  ++i;  // closing context bracket
  return c;
}

void expect_word(std::string_view text, size_t& i, std::string_view word,
                 const std::string& file, long line) {
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (text.substr(i, word.size()) != word)
    throw FormatError("expected '" + std::string(word) + "' in rule", file, line);
  i += word.size();
}

}  // namespace

Rule parse_rule_text(std::string_view text, RuleSource source, const std::string& file,
                     long line) {
  Rule r;
  r.source = source;
  size_t i = 0;
  expect_word(text, i, "[", file, line);
  expect_word(text, i, "llc:", file, line);
  r.llc = parse_ctx(text, i, file, line);
  expect_word(text, i, ",", file, line);
  expect_word(text, i, "lc:", file, line);
  r.lc = parse_ctx(text, i, file, line);
  expect_word(text, i, ",", file, line);

  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (text.substr(i, 7) == "choose:") {
    r.action = RuleAction::Choose;
    i += 7;
  } else if (text.substr(i, 7) == "delete:") {
    r.action = RuleAction::Delete;
    i += 7;
  } else {
    throw FormatError("expected 'choose:' or 'delete:' in rule", file, line);
  }
  // target constraint: a single bracketed constraint
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] != '[')
    throw FormatError("expected '[' opening the target constraint", file, line);
  {
    size_t start = i;
    int depth = 0;
    bool quoted = false;
    for (; i < text.size(); ++i) {
      char ch = text[i];
      if (quoted) {
        if (ch == '\'') quoted = false;
        continue;
      }
      if (ch == '\'') quoted = true;
      else if (ch == '[') ++depth;
      else if (ch == ']') {
        --depth;
        if (depth == 0) {
          ++i;
          break;
        }
      }
    }
    r.target = FeatureConstraint::parse_text(trim(text.substr(start, i - start)), file, line);
  }
  expect_word(text, i, ",", file, line);
  expect_word(text, i, "rc:", file, line);
  r.rc = parse_ctx(text, i, file, line);
  expect_word(text, i, ",", file, line);
  expect_word(text, i, "rrc:", file, line);
  r.rrc = parse_ctx(text, i, file, line);
  expect_word(text, i, "]", file, line);
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '.') ++i;  // tolerate a trailing period
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size()) throw FormatError("trailing characters after rule", file, line);

  r.validate();
  return r;
}

std::vector<Rule> decode_rules(std::istream& in, RuleSource source, const std::string& name) {
  std::vector<Rule> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    out.push_back(parse_rule_text(body, source, name, lineno));
  }
  return out;
}

std::vector<Rule> decode_rules_text(std::string_view text, RuleSource source,
                                    const std::string& name) {
  std::istringstream in{std::string(text)};
  return decode_rules(in, source, name);
}

std::vector<Rule> load_rules(const std::string& path, RuleSource source) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open rule file", path);
  return decode_rules(in, source, path);
}

std::string encode_rules(const std::vector<Rule>& rules) {
  std::string out;
  for (const auto& r : rules) {
    out += r.to_text();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- matching

PositionMatch match_position(const FeatureConstraint& c, const Token& t, MatchMode mode,
                             bool stem_ok) {
  PositionMatch m;
  if (mode == MatchMode::UnambiguousOnly && !t.unambiguous()) return m;
  for (int i = 0; i < static_cast<int>(t.parses.size()); ++i) {
    const FeatureStructure& fs = t.parses[i].fs;
    bool hit = c.subsumes(fs);
    if (!hit && stem_ok && fs.derived()) hit = c.subsumes(*fs.stem());
    if (hit) m.parses.push_back(i);
  }
  m.matched = !m.parses.empty();
  return m;
}

PositionMatch match_context_at(const Sentence& s, int pos, const FeatureConstraint& c,
                               MatchMode mode, bool stem_ok) {
  if (pos < 0 || pos >= static_cast<int>(s.tokens.size())) {
    PositionMatch m;
    m.matched = c.matches_boundary();
    return m;
  }
  return match_position(c, s.tokens[pos], mode, stem_ok);
}

ApplyOptions ApplyOptions::for_rule(const Rule& r) {
  if (r.source == RuleSource::Learned) return learned();
  return r.action == RuleAction::Choose ? hand_choose() : hand_delete();
}

namespace {

void keep_indices(Token& t, const std::vector<int>& keep) {
  std::vector<Parse> kept;
  kept.reserve(keep.size());
  for (int i : keep) kept.push_back(std::move(t.parses[i]));
  t.parses = std::move(kept);
}

}  // namespace

bool apply_rule_at(Sentence& s, int i, const Rule& r, const ApplyOptions& opts) {
  const int n = static_cast<int>(s.tokens.size());
  if (i < 0 || i >= n) return false;
  Token& focus = s.tokens[i];

  // target must pick out a proper, non-empty subset of the focus parses
  std::vector<int> subsumed;
  for (int p = 0; p < static_cast<int>(focus.parses.size()); ++p)
    if (r.target.subsumes(focus.parses[p].fs)) subsumed.push_back(p);
  if (subsumed.empty() || subsumed.size() == focus.parses.size()) return false;

  struct CtxHit {
    int pos;
    std::vector<int> parses;
  };
  std::vector<CtxHit> hits;
  auto check = [&](const std::optional<FeatureConstraint>& c, int pos, bool is_rc) {
    if (!c) return true;
    PositionMatch m = match_context_at(s, pos, *c, opts.context_mode, opts.stem_rc && is_rc);
    if (!m.matched) return false;
    hits.push_back(CtxHit{pos, std::move(m.parses)});
    return true;
  };
  if (!check(r.llc, i - 2, false)) return false;
  if (!check(r.lc, i - 1, false)) return false;
  if (!check(r.rc, i + 1, true)) return false;
  if (!check(r.rrc, i + 2, false)) return false;

  std::vector<int> keep;
  if (r.action == RuleAction::Choose) {
    keep = subsumed;
  } else {
    for (int p = 0; p < static_cast<int>(focus.parses.size()); ++p)
      if (std::find(subsumed.begin(), subsumed.end(), p) == subsumed.end()) keep.push_back(p);
  }
  if (keep.empty()) return false;  // never empty a token

  bool changed = false;
  if (keep.size() < focus.parses.size()) {
    keep_indices(focus, keep);
    changed = true;
  }
  if (opts.simultaneous_contexts) {
    // ambiguous context positions that matched are reduced to their
    // matching parses in the same application
    for (const CtxHit& h : hits) {
      if (h.pos < 0 || h.pos >= n) continue;
      Token& ctx = s.tokens[h.pos];
      if (h.parses.empty() || h.parses.size() >= ctx.parses.size()) continue;
      keep_indices(ctx, h.parses);
      changed = true;
    }
  }
  return changed;
}

namespace {

long fixpoint_sentence(Sentence& s, const std::vector<Rule>& rules, const ApplyOptions& opts) {
  long applications = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < static_cast<int>(s.tokens.size()); ++i) {
      for (const Rule& r : rules) {
        if (apply_rule_at(s, i, r, opts)) {
          ++applications;
          changed = true;
        }
      }
    }
  }
  return applications;
}

}  // namespace

PassStats run_pass(Corpus& c, const std::vector<Rule>& rules, const ApplyOptions& opts,
                   int jobs) {
  PassStats stats;
  if (rules.empty() || c.sentences.empty()) return stats;

  const size_t n = c.sentences.size();
  std::vector<long> apps(n, 0);
  if (jobs <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) apps[i] = fixpoint_sentence(c.sentences[i], rules, opts);
  } else {
    size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < n; i += workers)
          apps[i] = fixpoint_sentence(c.sentences[i], rules, opts);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (long a : apps) stats.applications += a;
  stats.sweeps = 1;  // per-sentence fixpoints; kept for diagnostics
  return stats;
}

}  // namespace morphdis
