#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "morphdis/ctxstats.hpp"
#include "morphdis/learner.hpp"

namespace morphdis {

// key = value configuration file; '#' comments. Recognized keys:
//   thresholds.rank1..rank4, damping, stop_limit, delete.fraction,
//   ctxstats.passes, ctxstats.weights (w_both,w_left,w_right),
//   ctxstats.fraction, masks, templates.choose, templates.delete,
//   patterns, suffixes, pipeline.templates (choose|delete|none),
//   unknown.harmony (on|off)
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile parse_text(std::string_view text, const std::string& file = {});
  static ConfigFile load_file(const std::string& path);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  ThresholdSchedule thresholds() const;
  CtxStatsConfig ctxstats() const;
  double delete_fraction() const;

 private:
  std::map<std::string, std::string> values_;
  std::string file_;
};

}  // namespace morphdis
