#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ontorec/eval.hpp"
#include "ontorec/log.hpp"
#include "ontorec/mapper.hpp"
#include "ontorec/miner.hpp"
#include "ontorec/rules.hpp"
#include "ontorec/synth.hpp"

namespace ontorec {

// Every pipeline knob in one place. Loaded from a line-oriented
// `key = value` file; each key is also a CLI flag of the same name.
struct PipelineConfig {
  // paths
  std::string log_path;
  std::string ontology_path;
  std::string annotations_path;
  std::string rules_path;  // defaults to <workdir>/rules.tsv
  std::string workdir = ".";

  // preprocessing
  LogFormat format = LogFormat::Combined;
  bool strip_query = true;
  int64_t timeout = kDefaultSessionTimeout;
  CleanOptions clean;

  // mapping
  bool collapse_duplicates = true;
  size_t min_len = 2;

  // mining
  double min_sup = 0.01;
  std::optional<int> delta = 10;
  std::optional<size_t> max_len;

  // rules
  double min_conf = 0.0;

  // recommendation
  size_t window = 2;
  size_t max_results = 10;

  // evaluation
  size_t folds = 10;
  std::vector<double> thresholds;  // default 0.1:1.0:0.1
  uint64_t seed = 42;

  // service
  std::string host = "127.0.0.1";
  int port = 8080;

  // synthetic generator
  SyntheticConfig synth;

  PipelineConfig();

  // Applies one key (underscore form); throws Error(Config) on unknown keys
  // or unparseable values.
  void apply(const std::string& key, const std::string& value);
  void validate() const;

  MinerParams miner_params() const;
  MapOptions map_options() const;
  RecommendOptions recommend_options(double threshold) const;

  std::string sessions_file() const;
  std::string sequences_file() const;
  std::string frequents_file() const;
  std::string rules_file() const;
  std::string report_file() const;
};

// `key = value` per line, '#' comments, unknown keys rejected.
void load_config_stream(std::istream& in, PipelineConfig* cfg);
void load_config_file(const std::string& path, PipelineConfig* cfg);

// "a:b:step" inclusive sweep, or a comma-separated list.
std::vector<double> parse_thresholds(const std::string& text);

// "inf" (or "none") clears the bound.
std::optional<int> parse_delta(const std::string& text);

}  // namespace ontorec
