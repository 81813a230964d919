// morphdis: morphological disambiguation toolkit command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morphdis/config.hpp"
#include "morphdis/corpus.hpp"
#include "morphdis/ctxstats.hpp"
#include "morphdis/learner.hpp"
#include "morphdis/pipeline.hpp"
#include "morphdis/rules.hpp"
#include "morphdis/synthetic.hpp"

namespace {

using namespace morphdis;

struct CommonArgs {
  std::string corpus, gold, out, config;
  std::string hand_choose, hand_delete, learned_choose, learned_delete;
  std::string templates_choose, templates_delete, masks, patterns, suffixes;
  std::string rules;  // gen-synthetic planted rules
  int jobs = 1;
  unsigned long long seed = 0;
  int sentences = 500;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "key=value configuration file");
  cmd->add_option("--out", a.out, "output path (default: standard output)");
  cmd->add_option("--jobs", a.jobs, "per-sentence parallelism")->check(CLI::PositiveNumber);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open output file", path);
  return f;
}

void write_out(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream f = open_out(path);
  f << data;
}

// CLI flags override config file paths.
std::string pick(const std::string& flag, const ConfigFile& cfg, const char* key) {
  if (!flag.empty()) return flag;
  return cfg.get_string(key, "");
}

ConfigFile load_config(const CommonArgs& a) {
  return a.config.empty() ? ConfigFile() : ConfigFile::load_file(a.config);
}

SuffixLexicon load_suffixes_or_empty(const CommonArgs& a, const ConfigFile& cfg) {
  std::string path = pick(a.suffixes, cfg, "suffixes");
  SuffixLexicon lex;
  if (!path.empty()) lex = SuffixLexicon::load_file(path);
  lex.set_harmony(cfg.get_bool("unknown.harmony", true));
  return lex;
}

RelevanceMask load_masks_or_empty(const CommonArgs& a, const ConfigFile& cfg) {
  std::string path = pick(a.masks, cfg, "masks");
  return path.empty() ? RelevanceMask() : RelevanceMask::load_file(path);
}

ProjectionTemplate load_template(const std::string& path) {
  return path.empty() ? ProjectionTemplate::identity() : ProjectionTemplate::load_file(path);
}

std::vector<Rule> load_rules_or_empty(const std::string& path, RuleSource source) {
  return path.empty() ? std::vector<Rule>() : load_rules(path, source);
}

int cmd_preprocess(const CommonArgs& a) {
  ConfigFile cfg = load_config(a);
  SuffixLexicon lex = load_suffixes_or_empty(a, cfg);
  DecodeOptions opts;
  std::vector<std::string> warnings;
  opts.warnings = &warnings;
  if (!lex.empty()) opts.guesser = &lex;
  Corpus corpus = load_corpus(a.corpus, opts);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  std::string patterns_path = pick(a.patterns, cfg, "patterns");
  if (!patterns_path.empty()) group_collocations(corpus, load_patterns(patterns_path));
  write_out(a.out, encode_corpus(corpus));
  return 0;
}

int cmd_learn(const CommonArgs& a) {
  ConfigFile cfg = load_config(a);
  Corpus training = load_corpus(a.corpus);
  RelevanceMask masks = load_masks_or_empty(a, cfg);
  ProjectionTemplate coarse =
      load_template(pick(a.templates_choose, cfg, "templates.choose"));
  ProjectionTemplate fine = load_template(pick(a.templates_delete, cfg, "templates.delete"));
  ThresholdSchedule sched = cfg.thresholds();
  std::vector<Rule> hand_choose = load_rules_or_empty(a.hand_choose, RuleSource::Hand);
  std::vector<Rule> hand_delete = load_rules_or_empty(a.hand_delete, RuleSource::Hand);

  ChooseLearnResult choose =
      learn_choose(training, hand_choose, hand_delete, sched, masks, coarse, &std::cerr);
  if (!choose.diagnostic.empty()) std::cerr << "warning: " << choose.diagnostic << "\n";

  std::vector<Rule> learned_choose;
  std::string choose_text;
  for (const auto& lr : choose.rules) {
    learned_choose.push_back(lr.rule);
    std::ostringstream line;
    line << "# learned-choose iter=" << lr.iteration << " score=" << lr.score << "\n"
         << lr.rule.to_text() << "\n";
    choose_text += line.str();
  }

  DeleteLearnConfig dcfg;
  dcfg.fraction = cfg.delete_fraction();
  dcfg.templates = fine;
  std::vector<LearnedRule> deletes =
      learn_delete(training, hand_choose, learned_choose, hand_delete, dcfg, masks, &std::cerr);
  std::string delete_text;
  for (const auto& lr : deletes) {
    std::ostringstream line;
    line << "# learned-delete score=" << lr.score << "\n" << lr.rule.to_text() << "\n";
    delete_text += line.str();
  }

  if (a.learned_choose.empty() && a.learned_delete.empty()) {
    std::cout << choose_text << delete_text;
    return 0;
  }
  if (!a.learned_choose.empty()) open_out(a.learned_choose) << choose_text;
  if (!a.learned_delete.empty()) open_out(a.learned_delete) << delete_text;
  return 0;
}

PipelineConfig pipeline_config(const CommonArgs& a, const ConfigFile& cfg) {
  PipelineConfig p;
  p.masks = load_masks_or_empty(a, cfg);
  p.ctxstats = cfg.ctxstats();
  p.jobs = a.jobs;
  std::string which = cfg.get_string("pipeline.templates", "delete");
  std::string path;
  if (which == "delete")
    path = pick(a.templates_delete, cfg, "templates.delete");
  else if (which == "choose")
    path = pick(a.templates_choose, cfg, "templates.choose");
  else if (which != "none")
    throw FormatError("pipeline.templates must be choose, delete or none");
  p.working_template = load_template(path);
  return p;
}

int cmd_disambiguate(const CommonArgs& a) {
  ConfigFile cfg = load_config(a);
  Corpus corpus = load_corpus(a.corpus);
  RuleSets rules;
  rules.hand_choose = load_rules_or_empty(a.hand_choose, RuleSource::Hand);
  rules.hand_delete = load_rules_or_empty(a.hand_delete, RuleSource::Hand);
  rules.learned_choose = load_rules_or_empty(a.learned_choose, RuleSource::Learned);
  rules.learned_delete = load_rules_or_empty(a.learned_delete, RuleSource::Learned);
  PipelineConfig pcfg = pipeline_config(a, cfg);

  std::optional<Corpus> gold;
  if (!a.gold.empty()) gold = load_corpus(a.gold);
  std::vector<StageSnapshot> trace;
  Corpus result = disambiguate(corpus, rules, pcfg, gold ? &*gold : nullptr,
                               gold ? &trace : nullptr);
  write_out(a.out, encode_corpus(result));
  if (gold) {
    // per-step metrics go to stdout when the corpus went to a file
    std::ostream& metrics = a.out.empty() ? std::cerr : std::cout;
    metrics << render_stage_table(trace);
  }
  return 0;
}

int cmd_evaluate(const CommonArgs& a) {
  Corpus pred = load_corpus(a.corpus);
  Corpus gold = load_corpus(a.gold);
  EvalReport report = evaluate(pred, gold);
  write_out(a.out, render_report(report));
  return 0;
}

int cmd_gen_synthetic(const CommonArgs& a) {
  SyntheticSpec spec;
  spec.seed = a.seed;
  spec.sentences = a.sentences;
  spec.planted = load_rules(a.rules, RuleSource::Hand);
  SyntheticResult result = gen_synthetic(spec);
  std::string prefix = a.out.empty() ? "synthetic" : a.out;
  open_out(prefix + ".corpus") << encode_corpus(result.ambiguous);
  open_out(prefix + ".gold") << encode_corpus(result.gold);
  std::cerr << "gen-synthetic: " << result.ambiguous.sentences.size() << " sentences, "
            << result.ambiguous.token_count() << " tokens, ambiguity "
            << result.ambiguous.ambiguity() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphological disambiguation toolkit"};
  app.require_subcommand(1);

  CommonArgs a;

  CLI::App* pre = app.add_subcommand("preprocess",
                                     "group collocations and guess unknown-word analyses");
  pre->add_option("--corpus", a.corpus, "analyzed corpus file")->required();
  pre->add_option("--patterns", a.patterns, "collocation pattern file");
  pre->add_option("--suffixes", a.suffixes, "suffix lexicon for unknown words");
  add_common(pre, a);

  CLI::App* learn = app.add_subcommand("learn", "induce choose and delete rules");
  learn->add_option("--corpus", a.corpus, "training corpus file")->required();
  learn->add_option("--hand-choose", a.hand_choose, "hand-crafted choose rules");
  learn->add_option("--hand-delete", a.hand_delete, "hand-crafted delete rules");
  learn->add_option("--learned-choose", a.learned_choose, "output path for learned choose rules");
  learn->add_option("--learned-delete", a.learned_delete, "output path for learned delete rules");
  learn->add_option("--templates", a.templates_choose, "projection template file (choose set)");
  learn->add_option("--templates-delete", a.templates_delete,
                    "projection template file (delete set)");
  learn->add_option("--masks", a.masks, "relevance mask file");
  add_common(learn, a);

  CLI::App* dis = app.add_subcommand("disambiguate", "run the five-step pipeline");
  dis->add_option("--corpus", a.corpus, "corpus file to disambiguate")->required();
  dis->add_option("--gold", a.gold, "gold standard for per-step metrics");
  dis->add_option("--hand-choose", a.hand_choose, "hand-crafted choose rules");
  dis->add_option("--hand-delete", a.hand_delete, "hand-crafted delete rules");
  dis->add_option("--learned-choose", a.learned_choose, "learned choose rules");
  dis->add_option("--learned-delete", a.learned_delete, "learned delete rules");
  dis->add_option("--templates", a.templates_choose, "projection template file (choose set)");
  dis->add_option("--templates-delete", a.templates_delete,
                  "projection template file (delete set)");
  dis->add_option("--masks", a.masks, "relevance mask file");
  add_common(dis, a);

  CLI::App* eval = app.add_subcommand("evaluate", "score a disambiguated corpus against gold");
  eval->add_option("--corpus", a.corpus, "disambiguated corpus file")->required();
  eval->add_option("--gold", a.gold, "gold standard file")->required();
  add_common(eval, a);

  CLI::App* gen = app.add_subcommand("gen-synthetic",
                                     "generate a synthetic ambiguous corpus and gold standard");
  gen->add_option("--rules", a.rules, "planted choose rules")->required();
  gen->add_option("--seed", a.seed, "random seed");
  gen->add_option("--sentences", a.sentences, "sentence count")->check(CLI::PositiveNumber);
  add_common(gen, a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1
  }

  try {
    if (pre->parsed()) return cmd_preprocess(a);
    if (learn->parsed()) return cmd_learn(a);
    if (dis->parsed()) return cmd_disambiguate(a);
    if (eval->parsed()) return cmd_evaluate(a);
    if (gen->parsed()) return cmd_gen_synthetic(a);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
