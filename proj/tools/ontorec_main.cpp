// ontorec command line: preprocess, mine, recommend, evaluate, serve,
// gen-synthetic. Stages communicate only through files in the workdir.

#include <CLI11.hpp>
#include <httplib.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ontorec/config.hpp"
#include "ontorec/errors.hpp"
#include "ontorec/eval.hpp"
#include "ontorec/log.hpp"
#include "ontorec/mapper.hpp"
#include "ontorec/miner.hpp"
#include "ontorec/ontology.hpp"
#include "ontorec/rules.hpp"
#include "ontorec/service.hpp"
#include "ontorec/synth.hpp"
#include "ontorec/text.hpp"

namespace {

using namespace ontorec;

std::string effective_log(const PipelineConfig& cfg) {
  return cfg.log_path.empty() ? cfg.workdir + "/access.log" : cfg.log_path;
}
std::string effective_ontology(const PipelineConfig& cfg) {
  return cfg.ontology_path.empty() ? cfg.workdir + "/ontology.txt"
                                   : cfg.ontology_path;
}
std::string effective_annotations(const PipelineConfig& cfg) {
  return cfg.annotations_path.empty() ? cfg.workdir + "/annotations.tsv"
                                      : cfg.annotations_path;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open input file: " + path);
  return in;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::Io, "failed writing: " + path);
}

template <typename Fn>
void write_file_with(const std::string& path, Fn&& fn) {
  std::ostringstream buffer;
  fn(buffer);
  write_file(path, buffer.str());
}

Ontology load_ontology_file(const std::string& path) {
  auto in = open_input(path);
  return load_ontology(in);
}

AnnotationMap load_annotations_file(const std::string& path, const Ontology& o) {
  auto in = open_input(path);
  return load_annotations(in, o);
}

int run_gen_synthetic(const PipelineConfig& cfg) {
  const SyntheticCorpus corpus = generate_synthetic(cfg.synth);
  write_file(effective_ontology(cfg), corpus.ontology_text);
  write_file(effective_annotations(cfg), corpus.annotations_text);
  write_file(effective_log(cfg), corpus.log_text);
  std::cout << "wrote " << effective_ontology(cfg) << '\n'
            << "wrote " << effective_annotations(cfg) << '\n'
            << "wrote " << effective_log(cfg) << '\n';
  return 0;
}

int run_preprocess(const PipelineConfig& cfg) {
  auto in = open_input(effective_log(cfg));
  ParseOptions parse_opts{cfg.format, cfg.strip_query};
  std::vector<LogEntry> entries;
  uint64_t parse_errors = 0;
  uint64_t lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++lines;
    LineError error = LineError::None;
    if (auto entry = parse_log_line(line, parse_opts, &error)) {
      entries.push_back(std::move(*entry));
    } else {
      ++parse_errors;
    }
  }

  CleanStats stats;
  const auto cleaned = clean_entries(entries, cfg.clean, &stats);
  const auto sessions = sessionize(cleaned, cfg.timeout);

  write_file_with(cfg.sessions_file(),
                  [&](std::ostream& out) { write_sessions(out, sessions); });

  std::cout << "entries_read=" << lines << " parse_errors=" << parse_errors
            << '\n'
            << "removed_status=" << stats.bad_status
            << " removed_method=" << stats.bad_method
            << " removed_assets=" << stats.assets
            << " removed_crawlers=" << stats.crawlers << " kept=" << stats.kept
            << '\n'
            << "sessions=" << sessions.size() << '\n'
            << "wrote " << cfg.sessions_file() << '\n';
  if (sessions.empty()) {
    std::cout << "warning: no sessions produced\n";
  }
  return 0;
}

int run_mine(const PipelineConfig& cfg) {
  const Ontology ontology = load_ontology_file(effective_ontology(cfg));
  const AnnotationMap annotations =
      load_annotations_file(effective_annotations(cfg), ontology);
  auto in = open_input(cfg.sessions_file());
  const auto sessions = read_sessions(in);

  const SequenceDatabase db = build_sequence_database(
      sessions, annotations, cfg.min_len, cfg.map_options());
  write_file_with(cfg.sequences_file(), [&](std::ostream& out) {
    write_sequence_database(out, db);
  });

  const SemanticDistanceMatrix matrix = SemanticDistanceMatrix::build(ontology);
  const auto frequents = onto_spm(db, matrix, cfg.miner_params());
  write_file_with(cfg.frequents_file(), [&](std::ostream& out) {
    write_frequents(out, frequents);
  });

  const RuleBase rules =
      generate_rules(frequents, cfg.min_conf, cfg.miner_params());
  write_file_with(cfg.rules_file(),
                  [&](std::ostream& out) { save_rulebase(out, rules); });

  std::cout << "sequences=" << db.size() << " frequents=" << frequents.size()
            << " rules=" << rules.size() << '\n'
            << "wrote " << cfg.sequences_file() << '\n'
            << "wrote " << cfg.frequents_file() << '\n'
            << "wrote " << cfg.rules_file() << '\n';
  return 0;
}

int run_recommend(const PipelineConfig& cfg, double threshold) {
  const Ontology ontology = load_ontology_file(effective_ontology(cfg));
  const AnnotationMap annotations =
      load_annotations_file(effective_annotations(cfg), ontology);
  const SemanticDistanceMatrix matrix = SemanticDistanceMatrix::build(ontology);
  auto rules_in = open_input(cfg.rules_file());
  const RuleBase rules = load_rulebase(rules_in);

  std::vector<std::string> urls;
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto url = trim(line);
    if (!url.empty()) urls.push_back(normalize_url(url, cfg.strip_query));
  }

  const auto recommendations =
      recommend(urls, rules, annotations, matrix, cfg.recommend_options(threshold));
  for (const Recommendation& rec : recommendations) {
    std::cout << format_fixed6(rec.confidence) << '\t' << rec.instance << '\t'
              << join(rec.pages, ",") << '\n';
  }
  if (recommendations.empty()) {
    std::cout << "# no rule matched the visited urls\n";
  }
  return 0;
}

int run_evaluate(const PipelineConfig& cfg) {
  const Ontology ontology = load_ontology_file(effective_ontology(cfg));
  const AnnotationMap annotations =
      load_annotations_file(effective_annotations(cfg), ontology);
  const SemanticDistanceMatrix matrix = SemanticDistanceMatrix::build(ontology);
  auto in = open_input(cfg.sessions_file());
  const auto sessions = read_sessions(in);
  const SequenceDatabase db = build_sequence_database(
      sessions, annotations, cfg.min_len, cfg.map_options());

  SweepConfig sweep;
  sweep.miner = cfg.miner_params();
  sweep.min_conf = cfg.min_conf;
  sweep.window = cfg.window;
  sweep.max_results = cfg.max_results;
  sweep.folds = cfg.folds;
  sweep.thresholds = cfg.thresholds;
  sweep.seed = cfg.seed;

  const EvalReport report = run_sweep(db, matrix, annotations, sweep);
  write_file_with(cfg.report_file(),
                  [&](std::ostream& out) { write_report(out, report); });
  write_report(std::cout, report);
  std::cout << "wrote " << cfg.report_file() << '\n';
  return 0;
}

int run_serve(const PipelineConfig& cfg) {
  const Ontology ontology = load_ontology_file(effective_ontology(cfg));
  ServiceContext ctx;
  ctx.annotations = load_annotations_file(effective_annotations(cfg), ontology);
  ctx.matrix = SemanticDistanceMatrix::build(ontology);
  auto rules_in = open_input(cfg.rules_file());
  ctx.rules = load_rulebase(rules_in);
  ctx.defaults = cfg.recommend_options(cfg.min_conf);
  ctx.strip_query = cfg.strip_query;

  httplib::Server server;
  register_routes(server, ctx);
  std::cout << "serving " << ctx.rules.size() << " rules on " << cfg.host << ':'
            << cfg.port << '\n';
  if (!server.listen(cfg.host, cfg.port)) {
    throw Error(ErrorCode::Io, "cannot bind " + cfg.host + ":" +
                                   std::to_string(cfg.port));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontology-driven navigation mining and next-page recommendation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  // every configuration key doubles as a flag of the same name
  static const std::vector<std::pair<std::string, std::string>> kKeys = {
      {"log", "access log path"},
      {"ontology", "ontology file path"},
      {"annotations", "annotation file path"},
      {"rules", "rule file path (default <workdir>/rules.tsv)"},
      {"workdir", "stage artifact directory"},
      {"format", "log format: common or combined"},
      {"strip_query", "strip query strings during url normalization"},
      {"timeout", "session timeout in seconds"},
      {"asset_suffixes", "comma-separated static asset suffixes"},
      {"crawler_keywords", "comma-separated crawler substrings"},
      {"collapse_duplicates", "collapse consecutive duplicate instances"},
      {"min_len", "minimum mapped sequence length"},
      {"min_sup", "minimum relative support"},
      {"delta", "maximum semantic distance, integer or inf"},
      {"max_len", "pattern length cap, 0 = unlimited"},
      {"min_conf", "minimum rule confidence"},
      {"window", "window count for recommendation"},
      {"max_results", "maximum recommendations returned"},
      {"folds", "cross-validation folds"},
      {"thresholds", "sweep a:b:step or comma list"},
      {"seed", "seed for every stochastic step"},
      {"host", "service bind address"},
      {"port", "service port"},
      {"product_count", "synthetic products"},
      {"category_count", "synthetic categories"},
      {"session_count", "synthetic sessions"},
      {"mean_session_length", "synthetic mean session length"},
      {"intra_category_bias", "synthetic in-category walk probability"},
      {"crawler_fraction", "synthetic crawler noise fraction"},
  };
  std::vector<std::string> values(kKeys.size());
  std::vector<CLI::Option*> options(kKeys.size());
  for (size_t i = 0; i < kKeys.size(); ++i) {
    std::string flag = "--" + kKeys[i].first;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    options[i] = app.add_option(flag, values[i], kKeys[i].second);
  }

  auto* preprocess = app.add_subcommand("preprocess", "parse, clean and sessionize the access log");
  auto* mine = app.add_subcommand("mine", "map sessions and mine frequent sequences and rules");
  auto* recommend_cmd = app.add_subcommand("recommend", "one-shot recommendation; urls on stdin");
  double recommend_threshold = 0.0;
  recommend_cmd->add_option("--threshold", recommend_threshold,
                            "minimum rule confidence");
  auto* evaluate = app.add_subcommand("evaluate", "cross-validated precision/coverage sweep");
  auto* serve = app.add_subcommand("serve", "HTTP recommendation service");
  auto* gen = app.add_subcommand("gen-synthetic", "statistics-matched synthetic corpus");

  CLI11_PARSE(app, argc, argv);

  try {
    ontorec::PipelineConfig cfg;
    if (!config_path.empty()) ontorec::load_config_file(config_path, &cfg);
    for (size_t i = 0; i < kKeys.size(); ++i) {
      if (options[i]->count() > 0) cfg.apply(kKeys[i].first, values[i]);
    }
    cfg.validate();

    if (preprocess->parsed()) return run_preprocess(cfg);
    if (mine->parsed()) return run_mine(cfg);
    if (recommend_cmd->parsed()) return run_recommend(cfg, recommend_threshold);
    if (evaluate->parsed()) return run_evaluate(cfg);
    if (serve->parsed()) return run_serve(cfg);
    if (gen->parsed()) return run_gen_synthetic(cfg);
  } catch (const ontorec::Error& e) {
    std::cerr << "error: " << ontorec::error_code_name(e.code()) << ": "
              << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
