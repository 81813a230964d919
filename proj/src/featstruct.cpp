#include "morphdis/featstruct.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "textutil.hpp"

namespace morphdis {

// ---------------------------------------------------------------- values

void FeatureStructure::set(const std::string& name, std::string atom) {
  for (auto& [n, v] : feats_) {
    if (n == name) {
      v = std::move(atom);
      return;
    }
  }
  feats_.emplace_back(name, Value(std::move(atom)));
}

void FeatureStructure::set_stem(FeatureStructure stem) {
  set_stem(std::make_shared<const FeatureStructure>(std::move(stem)));
}

void FeatureStructure::set_stem(FeatPtr stem) {
  for (auto& [n, v] : feats_) {
    if (n == kStem) {
      v = std::move(stem);
      return;
    }
  }
  feats_.emplace_back(kStem, Value(std::move(stem)));
}

void FeatureStructure::add_unique(const std::string& name, std::string atom) {
  if (has(name)) throw FormatError("duplicate feature " + name + " within one level");
  feats_.emplace_back(name, Value(std::move(atom)));
}

bool FeatureStructure::has(std::string_view name) const {
  for (const auto& [n, v] : feats_)
    if (n == name) return true;
  return false;
}

const std::string* FeatureStructure::atom(std::string_view name) const {
  for (const auto& [n, v] : feats_)
    if (n == name) return std::get_if<std::string>(&v);
  return nullptr;
}

const FeatureStructure* FeatureStructure::stem() const {
  for (const auto& [n, v] : feats_) {
    if (n == kStem) {
      if (auto* p = std::get_if<FeatPtr>(&v)) return p->get();
      return nullptr;
    }
  }
  return nullptr;
}

int FeatureStructure::depth() const {
  const FeatureStructure* s = stem();
  return s ? 1 + s->depth() : 0;
}

namespace {

// Escapes characters that are structural in canonical keys.
void append_escaped(std::string& out, std::string_view s) {
  static const char hex[] = "0123456789ABCDEF";
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (c == '{' || c == '}' || c == '=' || c == ';' || c == '%' || c == '|' || u < 0x21) {
      out += '%';
      out += hex[u >> 4];
      out += hex[u & 0xF];
    } else {
      out += c;
    }
  }
}

void key_into(std::string& out, const FeatureStructure& f) {
  std::vector<const std::pair<std::string, FeatureStructure::Value>*> sorted;
  sorted.reserve(f.features().size());
  for (const auto& fv : f.features()) sorted.push_back(&fv);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  out += '{';
  for (const auto* fv : sorted) {
    append_escaped(out, fv->first);
    out += '=';
    if (const auto* atom = std::get_if<std::string>(&fv->second)) {
      append_escaped(out, *atom);
    } else {
      const auto& ptr = std::get<FeatPtr>(fv->second);
      if (ptr) key_into(out, *ptr);
    }
    out += ';';
  }
  out += '}';
}

}  // namespace

std::string FeatureStructure::canonical_key() const {
  std::string out;
  key_into(out, *this);
  return out;
}

bool FeatureStructure::operator==(const FeatureStructure& other) const {
  if (feats_.size() != other.feats_.size()) return false;
  for (const auto& [name, val] : feats_) {
    if (const auto* atom = std::get_if<std::string>(&val)) {
      const std::string* o = other.atom(name);
      if (!o || *o != *atom) return false;
    } else {
      if (name != kStem) return false;
      const FeatureStructure* mine = std::get<FeatPtr>(val).get();
      const FeatureStructure* theirs = other.stem();
      if (!mine || !theirs || !(*mine == *theirs)) return false;
    }
  }
  return true;
}

const FeatureStructure& boundary_parse() {
  static const FeatureStructure b = [] {
    FeatureStructure f;
    f.set(kCat, kBoundaryCat);
    return f;
  }();
  return b;
}

// ---------------------------------------------------------- linear parses

std::string LinearParse::to_text() const {
  std::string out = "[";
  for (const auto& e : entries) {
    out += '[';
    out += e.name;
    out += ' ';
    out += e.value;
    if (e.is_conv()) {
      out += ' ';
      out += e.extra;
    }
    out += ']';
  }
  out += ']';
  return out;
}

namespace {

struct Cursor {
  std::string_view s;
  size_t i = 0;
  std::string file;
  long line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw FormatError(msg, file, line); }

  bool eof() const { return i >= s.size(); }
  char peek() const { return eof() ? '\0' : s[i]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  void expect(char c) {
    skip_ws();
    if (eof() || s[i] != c) fail(std::string("expected '") + c + "' in " + std::string(s));
    ++i;
  }
  bool try_consume(char c) {
    skip_ws();
    if (!eof() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  // A run of characters that can appear in names and unquoted values.
  // Constraint syntax additionally reserves ':' and ','.
  std::string_view token(bool constraint_syntax = false) {
    skip_ws();
    size_t b = i;
    while (!eof() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '[' &&
           s[i] != ']' && (!constraint_syntax || (s[i] != ',' && s[i] != ':')))
      ++i;
    if (i == b) fail("expected a symbol in " + std::string(s));
    return s.substr(b, i - b);
  }
};

}  // namespace

LinearParse LinearParse::parse_text(std::string_view text, const std::string& file, long line) {
  Cursor c{text, 0, file, line};
  LinearParse p;
  c.expect('[');
  while (!c.try_consume(']')) {
    c.expect('[');
    LinearEntry e;
    e.name = to_upper(c.token());
    e.value = std::string(c.token());
    if (e.is_conv()) {
      c.skip_ws();
      if (c.peek() == ']') c.fail("CONV entry missing suffix label");
      e.extra = std::string(c.token());
    }
    c.expect(']');
    p.entries.push_back(std::move(e));
    if (c.eof()) c.fail("unterminated parse");
  }
  c.skip_ws();
  if (!c.eof()) c.fail("trailing characters after parse");
  if (p.entries.size() < 2 || p.entries[0].name != kCat || p.entries[1].name != kRoot)
    c.fail("parse must begin with CAT and ROOT entries: " + std::string(text));
  return p;
}

FeatureStructure hierarchize(const LinearParse& p) {
  FeatureStructure level;
  for (const auto& e : p.entries) {
    if (e.is_conv()) {
      if (e.extra.empty()) throw FormatError("CONV entry missing suffix label");
      FeatureStructure outer;
      outer.add_unique(kCat, e.value);
      outer.add_unique(kSuffix, e.extra);
      outer.set_stem(std::move(level));
      level = std::move(outer);
    } else {
      level.add_unique(e.name, e.value);
    }
  }
  return level;
}

LinearParse linearize(const FeatureStructure& f) {
  std::vector<const FeatureStructure*> levels;
  for (const FeatureStructure* l = &f; l != nullptr; l = l->stem()) levels.push_back(l);
  std::reverse(levels.begin(), levels.end());

  LinearParse p;
  for (size_t li = 0; li < levels.size(); ++li) {
    const FeatureStructure& level = *levels[li];
    if (li > 0) {
      const std::string* cat = level.atom(kCat);
      const std::string* suffix = level.atom(kSuffix);
      LinearEntry conv;
      conv.name = kConv;
      conv.value = cat ? *cat : std::string(kUnknownCat);
      conv.extra = suffix ? *suffix : "NONE";
      p.entries.push_back(std::move(conv));
    }
    for (const auto& [name, val] : level.features()) {
      if (name == kStem) continue;
      if (li > 0 && (name == kCat || name == kSuffix)) continue;
      const auto* atom = std::get_if<std::string>(&val);
      if (!atom) continue;
      p.entries.push_back(LinearEntry{name, *atom, {}});
    }
  }
  return p;
}

// ------------------------------------------------------------ constraints

void FeatureConstraint::require(const std::string& name, std::string value, bool exact) {
  for (auto& [n, a] : feats_) {
    if (n == name) {
      a = Atom{std::move(value), exact};
      return;
    }
  }
  feats_.emplace_back(name, Atom{std::move(value), exact});
}

void FeatureConstraint::require_stem(FeatureConstraint stem) {
  stem_ = std::make_shared<const FeatureConstraint>(std::move(stem));
}

namespace {

bool atom_matches(const FeatureConstraint::Atom& a, const std::string& value) {
  return a.exact ? a.text == value : ci_equal(a.text, value);
}

}  // namespace

bool FeatureConstraint::subsumes(const FeatureStructure& f) const {
  for (const auto& [name, atom] : feats_) {
    const std::string* v = f.atom(name);
    if (!v || !atom_matches(atom, *v)) return false;
  }
  if (stem_) {
    const FeatureStructure* s = f.stem();
    if (!s || !stem_->subsumes(*s)) return false;
  }
  return true;
}

bool FeatureConstraint::generalizes(const FeatureConstraint& other) const {
  for (const auto& [name, atom] : feats_) {
    bool found = false;
    for (const auto& [n2, a2] : other.features()) {
      if (n2 != name) continue;
      found = ci_equal(atom.text, a2.text);
      break;
    }
    if (!found) return false;
  }
  if (stem_) {
    if (!other.stem() || !stem_->generalizes(*other.stem())) return false;
  }
  return true;
}

bool FeatureConstraint::matches_boundary() const {
  if (stem_ || feats_.size() != 1) return false;
  const auto& [name, atom] = feats_.front();
  return name == kCat && ci_equal(atom.text, kBoundaryCat);
}

std::string FeatureConstraint::to_text() const {
  std::vector<const std::pair<std::string, Atom>*> sorted;
  sorted.reserve(feats_.size());
  for (const auto& fv : feats_) sorted.push_back(&fv);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  std::string out = "[";
  bool first = true;
  for (const auto* fv : sorted) {
    if (!first) out += ',';
    first = false;
    out += to_lower(fv->first);
    out += ':';
    if (fv->second.exact) {
      out += '\'';
      out += fv->second.text;
      out += '\'';
    } else {
      out += fv->second.text;
    }
  }
  if (stem_) {
    if (!first) out += ',';
    out += "stem:";
    out += stem_->to_text();
  }
  out += ']';
  return out;
}

namespace {

FeatureConstraint parse_constraint(Cursor& c) {
  FeatureConstraint out;
  c.expect('[');
  c.skip_ws();
  if (c.try_consume(']')) return out;
  while (true) {
    std::string name = to_upper(c.token(true));
    c.expect(':');
    c.skip_ws();
    if (c.peek() == '[') {
      if (name != kStem) c.fail("nested constraint allowed only under 'stem'");
      out.require_stem(parse_constraint(c));
    } else if (c.peek() == '\'') {
      ++c.i;
      size_t b = c.i;
      while (!c.eof() && c.s[c.i] != '\'') ++c.i;
      if (c.eof()) c.fail("unterminated quoted value");
      out.require(name, std::string(c.s.substr(b, c.i - b)), /*exact=*/true);
      ++c.i;
    } else {
      out.require(name, std::string(c.token(true)), /*exact=*/false);
    }
    c.skip_ws();
    if (c.try_consume(']')) break;
    c.expect(',');
  }
  return out;
}

}  // namespace

FeatureConstraint FeatureConstraint::parse_text(std::string_view text, const std::string& file,
                                                long line) {
  Cursor c{text, 0, file, line};
  FeatureConstraint out = parse_constraint(c);
  c.skip_ws();
  if (!c.eof()) c.fail("trailing characters after constraint");
  return out;
}

FeatureConstraint FeatureConstraint::from_structure(const FeatureStructure& f) {
  FeatureConstraint out;
  for (const auto& [name, val] : f.features()) {
    if (const auto* atom = std::get_if<std::string>(&val)) {
      out.require(name, *atom, /*exact=*/true);
    } else if (const auto& ptr = std::get<FeatPtr>(val); ptr) {
      out.require_stem(from_structure(*ptr));
    }
  }
  return out;
}

// -------------------------------------------------------------- templates

ProjectionTemplate ProjectionTemplate::identity() {
  ProjectionTemplate t;
  t.identity_ = true;
  return t;
}

void ProjectionTemplate::set_rule(const std::string& cat, CategoryRule rule) {
  by_cat_[to_upper(cat)] = std::move(rule);
  identity_ = false;
}

void ProjectionTemplate::set_fallback(CategoryRule rule) {
  fallback_ = std::move(rule);
  identity_ = false;
}

ProjectionTemplate ProjectionTemplate::parse_text(std::string_view text,
                                                  const std::string& file) {
  ProjectionTemplate t;
  long lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    size_t colon = body.find(':');
    if (colon == std::string_view::npos)
      throw FormatError("template line needs 'CAT: features'", file, lineno);
    std::string cat = to_upper(trim(body.substr(0, colon)));
    CategoryRule rule;
    for (std::string_view tok : split_ws(body.substr(colon + 1))) {
      if (tok == "+stem")
        rule.keep_stem = true;
      else
        rule.keep.insert(to_upper(tok));
    }
    if (cat == "*")
      t.set_fallback(std::move(rule));
    else
      t.set_rule(cat, std::move(rule));
  }
  return t;
}

ProjectionTemplate ProjectionTemplate::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open template file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

FeatureStructure ProjectionTemplate::apply(const FeatureStructure& f) const {
  if (identity_) return f;
  const CategoryRule* rule = nullptr;
  if (const std::string* cat = f.atom(kCat)) {
    auto it = by_cat_.find(to_upper(*cat));
    if (it != by_cat_.end()) rule = &it->second;
  }
  if (!rule && fallback_) rule = &*fallback_;
  if (!rule) return f;  // unlisted category, no fallback: keep everything

  FeatureStructure out;
  for (const auto& [name, val] : f.features()) {
    if (name == kStem) {
      if (rule->keep_stem) {
        if (const auto& ptr = std::get<FeatPtr>(val); ptr) out.set_stem(apply(*ptr));
      }
      continue;
    }
    if (name != kCat && rule->keep.find(name) == rule->keep.end()) continue;
    if (const auto* atom = std::get_if<std::string>(&val)) out.set(name, *atom);
  }
  return out;
}

// ------------------------------------------------------------------ masks

const char* context_position_name(ContextPosition p) {
  switch (p) {
    case ContextPosition::Llc: return "llc";
    case ContextPosition::Lc: return "lc";
    case ContextPosition::Rc: return "rc";
    case ContextPosition::Rrc: return "rrc";
    case ContextPosition::Focus: return "focus";
  }
  return "?";
}

RelevanceMask RelevanceMask::parse_text(std::string_view text, const std::string& file) {
  RelevanceMask m;
  long lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    size_t colon = body.find(':');
    if (colon == std::string_view::npos)
      throw FormatError("mask line needs 'position: features'", file, lineno);
    std::string pos = to_lower(trim(body.substr(0, colon)));
    ContextPosition p;
    if (pos == "llc")
      p = ContextPosition::Llc;
    else if (pos == "lc")
      p = ContextPosition::Lc;
    else if (pos == "rc")
      p = ContextPosition::Rc;
    else if (pos == "rrc")
      p = ContextPosition::Rrc;
    else if (pos == "focus")
      p = ContextPosition::Focus;
    else
      throw FormatError("unknown context position '" + pos + "'", file, lineno);
    for (std::string_view tok : split_ws(body.substr(colon + 1)))
      m.drop(p, to_upper(tok));
  }
  return m;
}

RelevanceMask RelevanceMask::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open mask file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

void RelevanceMask::drop(ContextPosition pos, const std::string& feature) {
  drop_[static_cast<int>(pos)].insert(feature);
}

const std::set<std::string>& RelevanceMask::dropped(ContextPosition pos) const {
  return drop_[static_cast<int>(pos)];
}

bool RelevanceMask::empty() const {
  for (const auto& d : drop_)
    if (!d.empty()) return false;
  return true;
}

FeatureStructure RelevanceMask::apply(const FeatureStructure& f, ContextPosition pos) const {
  const auto& drop = drop_[static_cast<int>(pos)];
  if (drop.empty()) return f;
  FeatureStructure out;
  for (const auto& [name, val] : f.features()) {
    if (drop.find(name) != drop.end()) continue;
    if (name == kStem) {
      if (const auto& ptr = std::get<FeatPtr>(val); ptr) out.set_stem(apply(*ptr, pos));
    } else if (const auto* atom = std::get_if<std::string>(&val)) {
      out.set(name, *atom);
    }
  }
  return out;
}

}  // namespace morphdis
