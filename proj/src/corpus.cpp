#include "morphdis/corpus.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "textutil.hpp"

namespace morphdis {

long Corpus::token_count() const {
  long n = 0;
  for (const auto& s : sentences) n += static_cast<long>(s.tokens.size());
  return n;
}

long Corpus::parse_count() const {
  long n = 0;
  for (const auto& s : sentences)
    for (const auto& t : s.tokens) n += static_cast<long>(t.parses.size());
  return n;
}

double Corpus::ambiguity() const {
  long t = token_count();
  return t == 0 ? 0.0 : static_cast<double>(parse_count()) / static_cast<double>(t);
}

namespace {

const char* origin_name(TokenOrigin o) {
  switch (o) {
    case TokenOrigin::Analyzer: return "analyzer";
    case TokenOrigin::Guesser: return "guesser";
    case TokenOrigin::Collocation: return "collocation";
  }
  return "analyzer";
}

bool parse_origin(std::string_view name, TokenOrigin& out) {
  if (name == "analyzer") out = TokenOrigin::Analyzer;
  else if (name == "guesser") out = TokenOrigin::Guesser;
  else if (name == "collocation") out = TokenOrigin::Collocation;
  else return false;
  return true;
}

void push_parse(Token& t, FeatureStructure fs) {
  for (const auto& p : t.parses)
    if (p.fs == fs) return;  // parses are pairwise distinct
  t.parses.emplace_back(std::move(fs));
}

}  // namespace

Corpus decode_corpus(std::istream& in, const std::string& name, const DecodeOptions& opts) {
  Corpus corpus;
  corpus.provenance = name;
  Sentence current;
  std::string line;
  long lineno = 0;

  auto flush_sentence = [&] {
    if (!current.tokens.empty()) {
      corpus.sentences.push_back(std::move(current));
      current = Sentence{};
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      flush_sentence();
      continue;
    }
    if (trim(line).front() == '#') continue;

    auto fields = split(line, '\t');
    Token tok;
    tok.surface = std::string(trim(fields[0]));
    if (tok.surface.empty()) throw FormatError("empty surface field", name, lineno);

    for (size_t i = 1; i < fields.size(); ++i) {
      std::string_view field = trim(fields[i]);
      if (field.empty()) continue;
      if (field.front() == '#') {
        // trailing comment; may carry token provenance
        std::string_view rest = trim(field.substr(1));
        if (rest.rfind("origin=", 0) == 0) {
          TokenOrigin o;
          if (parse_origin(rest.substr(7), o)) tok.origin = o;
        }
        break;
      }
      LinearParse lp = LinearParse::parse_text(field, name, lineno);
      push_parse(tok, hierarchize(lp));
    }

    if (tok.parses.empty() && opts.guesser != nullptr) {
      for (FeatureStructure& fs : guess(tok.surface, *opts.guesser))
        push_parse(tok, std::move(fs));
      if (!tok.parses.empty()) tok.origin = TokenOrigin::Guesser;
    }
    if (tok.parses.empty()) {
      FeatureStructure fs;
      fs.set(kCat, kUnknownCat);
      fs.set(kRoot, tok.surface);
      tok.parses.emplace_back(std::move(fs));
      if (opts.warnings)
        opts.warnings->push_back(name + ":" + std::to_string(lineno) + ": token '" +
                                 tok.surface + "' has no analyses; tagged CAT UNKNOWN");
    }
    current.tokens.push_back(std::move(tok));
  }
  flush_sentence();
  return corpus;
}

Corpus decode_corpus_text(std::string_view text, const std::string& name,
                          const DecodeOptions& opts) {
  std::istringstream in{std::string(text)};
  return decode_corpus(in, name, opts);
}

Corpus load_corpus(const std::string& path, const DecodeOptions& opts) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file", path);
  return decode_corpus(in, path, opts);
}

std::string encode_corpus(const Corpus& c) {
  std::string out;
  bool first_sentence = true;
  for (const auto& s : c.sentences) {
    if (!first_sentence) out += '\n';
    first_sentence = false;
    for (const auto& t : s.tokens) {
      out += t.surface;
      for (const auto& p : t.parses) {
        out += '\t';
        out += linearize(p.fs).to_text();
      }
      if (t.origin != TokenOrigin::Analyzer) {
        out += "\t# origin=";
        out += origin_name(t.origin);
      }
      out += '\n';
    }
  }
  return out;
}

// ------------------------------------------------------------ collocations

std::vector<CollocationPattern> decode_patterns(std::string_view text, const std::string& file) {
  std::vector<CollocationPattern> out;
  long lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = split(body, '\t');
    if (fields.size() < 4)
      throw FormatError("pattern line needs constraint TAB constraint TAB predicate TAB template",
                        file, lineno);
    CollocationPattern p;
    p.first = FeatureConstraint::parse_text(trim(fields[0]), file, lineno);
    p.second = FeatureConstraint::parse_text(trim(fields[1]), file, lineno);
    std::string_view pred = trim(fields[2]);
    if (pred == "none")
      p.predicate = CollocationPattern::Predicate::None;
    else if (pred == "equal-root")
      p.predicate = CollocationPattern::Predicate::EqualRoot;
    else if (pred == "equal-root-opposite-sense")
      p.predicate = CollocationPattern::Predicate::EqualRootOppositeSense;
    else
      throw FormatError("unknown duplication predicate '" + std::string(pred) + "'", file,
                        lineno);
    std::string_view tpl = trim(fields[3]);
    if (!tpl.empty() && tpl.front() == '*') {
      p.splice_first = true;
      tpl = trim(tpl.substr(1));
    } else {
      p.splice_first = false;
    }
    if (!tpl.empty()) {
      // entries only; the leading CAT/ROOT check does not apply to the tail
      std::string wrapped = "[[CAT X][ROOT x]" + std::string(tpl) + "]";
      LinearParse lp = LinearParse::parse_text(wrapped, file, lineno);
      p.extra.assign(lp.entries.begin() + 2, lp.entries.end());
    }
    if (!p.splice_first && p.extra.size() < 2)
      throw FormatError("output template without '*' must be a full parse", file, lineno);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<CollocationPattern> load_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open pattern file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return decode_patterns(buf.str(), path);
}

namespace {

bool predicate_holds(CollocationPattern::Predicate pred, const FeatureStructure& a,
                     const FeatureStructure& b) {
  switch (pred) {
    case CollocationPattern::Predicate::None:
      return true;
    case CollocationPattern::Predicate::EqualRoot: {
      const std::string* ra = a.atom(kRoot);
      const std::string* rb = b.atom(kRoot);
      return ra && rb && *ra == *rb;
    }
    case CollocationPattern::Predicate::EqualRootOppositeSense: {
      const std::string* ra = a.atom(kRoot);
      const std::string* rb = b.atom(kRoot);
      const std::string* sa = a.atom("SENSE");
      const std::string* sb = b.atom("SENSE");
      return ra && rb && *ra == *rb && sa && sb && *sa != *sb;
    }
  }
  return false;
}

Token merge_tokens(const Token& a, const Token& b, const FeatureStructure& matched,
                   const CollocationPattern& pat) {
  LinearParse lp;
  if (pat.splice_first) lp = linearize(matched);
  lp.entries.insert(lp.entries.end(), pat.extra.begin(), pat.extra.end());

  Token out;
  out.surface = a.surface + " " + b.surface;
  out.origin = TokenOrigin::Collocation;
  out.parses.emplace_back(hierarchize(lp));
  return out;
}

}  // namespace

Sentence group_collocations(const Sentence& s, const std::vector<CollocationPattern>& patterns) {
  Sentence out;
  size_t i = 0;
  while (i < s.tokens.size()) {
    const Token* merged = nullptr;
    Token merged_tok;
    if (i + 1 < s.tokens.size()) {
      for (const auto& pat : patterns) {
        const Token& a = s.tokens[i];
        const Token& b = s.tokens[i + 1];
        bool found = false;
        // first matching parse pair, in parse order
        for (const auto& pa : a.parses) {
          if (!pat.first.subsumes(pa.fs)) continue;
          for (const auto& pb : b.parses) {
            if (!pat.second.subsumes(pb.fs)) continue;
            if (!predicate_holds(pat.predicate, pa.fs, pb.fs)) continue;
            merged_tok = merge_tokens(a, b, pa.fs, pat);
            merged = &merged_tok;
            found = true;
            break;
          }
          if (found) break;
        }
        if (found) break;
      }
    }
    if (merged) {
      out.tokens.push_back(std::move(merged_tok));
      i += 2;
    } else {
      out.tokens.push_back(s.tokens[i]);
      i += 1;
    }
  }
  return out;
}

void group_collocations(Corpus& c, const std::vector<CollocationPattern>& patterns) {
  if (patterns.empty()) return;
  for (auto& s : c.sentences) s = group_collocations(s, patterns);
}

// ------------------------------------------------------- projection glue

Corpus project_corpus(const Corpus& c, const ProjectionTemplate& t) {
  if (t.is_identity()) return c;
  Corpus out;
  out.provenance = c.provenance;
  out.sentences.reserve(c.sentences.size());
  for (const auto& s : c.sentences) {
    Sentence ns;
    ns.tokens.reserve(s.tokens.size());
    for (const auto& tok : s.tokens) {
      Token nt;
      nt.surface = tok.surface;
      nt.origin = tok.origin;
      std::vector<std::string> keys;
      for (const auto& p : tok.parses) {
        FeatureStructure proj = t.apply(p.fs);
        std::string key = proj.canonical_key();
        bool found = false;
        for (size_t k = 0; k < keys.size(); ++k) {
          if (keys[k] == key) {
            nt.parses[k].originals.push_back(p.fs);
            found = true;
            break;
          }
        }
        if (!found) {
          Parse np(std::move(proj));
          np.originals.push_back(p.fs);
          nt.parses.push_back(std::move(np));
          keys.push_back(std::move(key));
        }
      }
      ns.tokens.push_back(std::move(nt));
    }
    out.sentences.push_back(std::move(ns));
  }
  return out;
}

Corpus restore_originals(const Corpus& c) {
  Corpus out;
  out.provenance = c.provenance;
  out.sentences.reserve(c.sentences.size());
  for (const auto& s : c.sentences) {
    Sentence ns;
    ns.tokens.reserve(s.tokens.size());
    for (const auto& tok : s.tokens) {
      Token nt;
      nt.surface = tok.surface;
      nt.origin = tok.origin;
      std::set<std::string> seen;
      for (const auto& p : tok.parses) {
        if (p.originals.empty()) {
          if (seen.insert(p.fs.canonical_key()).second) nt.parses.emplace_back(p.fs);
          continue;
        }
        for (const auto& orig : p.originals)
          if (seen.insert(orig.canonical_key()).second) nt.parses.emplace_back(orig);
      }
      ns.tokens.push_back(std::move(nt));
    }
    out.sentences.push_back(std::move(ns));
  }
  return out;
}

}  // namespace morphdis
