#include "morphdis/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "textutil.hpp"

namespace morphdis {

ConfigFile ConfigFile::parse_text(std::string_view text, const std::string& file) {
  ConfigFile cfg;
  cfg.file_ = file;
  long lineno = 0;
  for (std::string_view line : split(text, '\n')) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw FormatError("configuration line needs key=value", file, lineno);
    std::string key = std::string(trim(body.substr(0, eq)));
    std::string value = std::string(trim(body.substr(eq + 1)));
    if (key.empty()) throw FormatError("empty configuration key", file, lineno);
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open configuration file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

bool ConfigFile::has(const std::string& key) const { return values_.count(key) > 0; }

std::optional<std::string> ConfigFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& dflt) const {
  auto v = get(key);
  return v ? *v : dflt;
}

double ConfigFile::get_double(const std::string& key, double dflt) const {
  auto v = get(key);
  if (!v) return dflt;
  char* end = nullptr;
  double d = std::strtod(v->c_str(), &end);
  if (end == v->c_str() || *end != '\0')
    throw FormatError("configuration key " + key + " is not a number: " + *v, file_);
  return d;
}

int ConfigFile::get_int(const std::string& key, int dflt) const {
  double d = get_double(key, dflt);
  return static_cast<int>(d);
}

bool ConfigFile::get_bool(const std::string& key, bool dflt) const {
  auto v = get(key);
  if (!v) return dflt;
  std::string s = to_lower(*v);
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw FormatError("configuration key " + key + " is not a boolean: " + *v, file_);
}

ThresholdSchedule ConfigFile::thresholds() const {
  ThresholdSchedule t;
  t.rank[0] = get_double("thresholds.rank1", t.rank[0]);
  t.rank[1] = get_double("thresholds.rank2", t.rank[1]);
  t.rank[2] = get_double("thresholds.rank3", t.rank[2]);
  t.rank[3] = get_double("thresholds.rank4", t.rank[3]);
  t.damping = get_double("damping", t.damping);
  t.stop_limit = get_double("stop_limit", t.stop_limit);
  t.validate();
  return t;
}

CtxStatsConfig ConfigFile::ctxstats() const {
  CtxStatsConfig c;
  c.passes = get_int("ctxstats.passes", c.passes);
  c.fraction = get_double("ctxstats.fraction", c.fraction);
  if (auto w = get("ctxstats.weights")) {
    auto parts = split(*w, ',');
    if (parts.size() != 3)
      throw FormatError("ctxstats.weights needs three comma-separated values", file_);
    auto num = [&](std::string_view s) {
      char* end = nullptr;
      std::string str(trim(s));
      double d = std::strtod(str.c_str(), &end);
      if (end == str.c_str() || *end != '\0')
        throw FormatError("ctxstats.weights is not numeric: " + str, file_);
      return d;
    };
    c.w_both = num(parts[0]);
    c.w_left = num(parts[1]);
    c.w_right = num(parts[2]);
  }
  c.validate();
  return c;
}

double ConfigFile::delete_fraction() const { return get_double("delete.fraction", 0.2); }

}  // namespace morphdis
