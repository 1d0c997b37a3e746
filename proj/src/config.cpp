#include "ontorec/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

namespace {

bool parse_bool(const std::string& text, bool* out) {
  const std::string v = to_lower(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    *out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    *out = false;
    return true;
  }
  return false;
}

double snap(double value) { return std::round(value * 1e6) / 1e6; }

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::Config, "bad value for " + key + ": '" + value + "'");
}

uint64_t want_u64(const std::string& key, const std::string& value) {
  uint64_t out = 0;
  if (!parse_u64(value, &out)) bad_value(key, value);
  return out;
}

double want_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!parse_double(value, &out)) bad_value(key, value);
  return out;
}

bool want_bool(const std::string& key, const std::string& value) {
  bool out = false;
  if (!parse_bool(value, &out)) bad_value(key, value);
  return out;
}

std::vector<std::string> want_list(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& part : split(value, ',')) {
    const auto item = trim(part);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

}  // namespace

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    double from = 0.0, to = 0.0, step = 0.0;
    if (parts.size() != 3 || !parse_double(parts[0], &from) ||
        !parse_double(parts[1], &to) || !parse_double(parts[2], &step) ||
        step <= 0.0 || from > to) {
      throw Error(ErrorCode::Config, "bad threshold sweep '" + text + "'");
    }
    for (double v = from; v <= to + step / 2; v += step) out.push_back(snap(v));
  } else {
    for (const std::string& part : want_list(text)) {
      double v = 0.0;
      if (!parse_double(part, &v)) {
        throw Error(ErrorCode::Config, "bad threshold '" + part + "'");
      }
      out.push_back(snap(v));
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::Config, "threshold list is empty");
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0 || out[i] > 1.0 || (i > 0 && out[i] <= out[i - 1])) {
      throw Error(ErrorCode::Config,
                  "thresholds must be ascending within [0, 1]");
    }
  }
  return out;
}

std::optional<int> parse_delta(const std::string& text) {
  const std::string v = to_lower(text);
  if (v == "inf" || v == "infinite" || v == "none") return std::nullopt;
  int64_t value = 0;
  if (!parse_i64(v, &value) || value < 0) {
    throw Error(ErrorCode::Config, "bad delta '" + text + "'");
  }
  return static_cast<int>(value);
}

PipelineConfig::PipelineConfig() { thresholds = parse_thresholds("0.1:1.0:0.1"); }

void PipelineConfig::apply(const std::string& key, const std::string& value) {
  if (key == "log") {
    log_path = value;
  } else if (key == "ontology") {
    ontology_path = value;
  } else if (key == "annotations") {
    annotations_path = value;
  } else if (key == "rules") {
    rules_path = value;
  } else if (key == "workdir") {
    workdir = value;
  } else if (key == "format") {
    const std::string v = to_lower(value);
    if (v == "common") {
      format = LogFormat::Common;
    } else if (v == "combined") {
      format = LogFormat::Combined;
    } else {
      bad_value(key, value);
    }
  } else if (key == "strip_query") {
    strip_query = want_bool(key, value);
  } else if (key == "timeout") {
    const uint64_t v = want_u64(key, value);
    if (v == 0) bad_value(key, value);
    timeout = static_cast<int64_t>(v);
  } else if (key == "asset_suffixes") {
    clean.asset_suffixes = want_list(value);
  } else if (key == "crawler_keywords") {
    clean.crawler_keywords = want_list(value);
  } else if (key == "collapse_duplicates") {
    collapse_duplicates = want_bool(key, value);
  } else if (key == "min_len") {
    min_len = want_u64(key, value);
  } else if (key == "min_sup") {
    min_sup = want_double(key, value);
  } else if (key == "delta") {
    delta = parse_delta(value);
  } else if (key == "max_len") {
    const uint64_t v = want_u64(key, value);
    max_len = v == 0 ? std::nullopt : std::optional<size_t>(v);
  } else if (key == "min_conf") {
    min_conf = want_double(key, value);
  } else if (key == "window") {
    window = want_u64(key, value);
  } else if (key == "max_results") {
    max_results = want_u64(key, value);
  } else if (key == "folds") {
    folds = want_u64(key, value);
  } else if (key == "thresholds") {
    thresholds = parse_thresholds(value);
  } else if (key == "seed") {
    seed = want_u64(key, value);
    synth.seed = seed;
  } else if (key == "host") {
    host = value;
  } else if (key == "port") {
    const uint64_t v = want_u64(key, value);
    if (v == 0 || v > 65535) bad_value(key, value);
    port = static_cast<int>(v);
  } else if (key == "product_count") {
    synth.product_count = want_u64(key, value);
  } else if (key == "category_count") {
    synth.category_count = want_u64(key, value);
  } else if (key == "session_count") {
    synth.session_count = want_u64(key, value);
  } else if (key == "mean_session_length") {
    synth.mean_session_length = want_double(key, value);
  } else if (key == "intra_category_bias") {
    synth.intra_category_bias = want_double(key, value);
  } else if (key == "crawler_fraction") {
    synth.crawler_fraction = want_double(key, value);
  } else {
    throw Error(ErrorCode::Config, "unknown configuration key '" + key + "'");
  }
}

void PipelineConfig::validate() const {
  if (!(min_sup > 0.0 && min_sup <= 1.0)) {
    throw Error(ErrorCode::Config, "min_sup must be in (0, 1]");
  }
  if (min_conf < 0.0 || min_conf > 1.0) {
    throw Error(ErrorCode::Config, "min_conf must be in [0, 1]");
  }
  if (window < 1) {
    throw Error(ErrorCode::Config, "window must be at least 1");
  }
  if (max_results < 1) {
    throw Error(ErrorCode::Config, "max_results must be at least 1");
  }
  if (min_len < 1) {
    throw Error(ErrorCode::Config, "min_len must be at least 1");
  }
  if (folds < 2) {
    throw Error(ErrorCode::Config, "folds must be at least 2");
  }
  if (timeout < 1) {
    throw Error(ErrorCode::Config, "timeout must be positive");
  }
}

MinerParams PipelineConfig::miner_params() const {
  MinerParams params;
  params.min_sup = min_sup;
  params.delta = delta;
  params.max_len = max_len;
  params.allow_repeats = !collapse_duplicates;
  return params;
}

MapOptions PipelineConfig::map_options() const {
  return {collapse_duplicates};
}

RecommendOptions PipelineConfig::recommend_options(double threshold) const {
  RecommendOptions opts;
  opts.window = window;
  opts.threshold = threshold;
  opts.max_results = max_results;
  opts.map = map_options();
  return opts;
}

std::string PipelineConfig::sessions_file() const { return workdir + "/sessions.tsv"; }
std::string PipelineConfig::sequences_file() const { return workdir + "/sequences.tsv"; }
std::string PipelineConfig::frequents_file() const { return workdir + "/frequents.tsv"; }
std::string PipelineConfig::rules_file() const {
  return rules_path.empty() ? workdir + "/rules.tsv" : rules_path;
}
std::string PipelineConfig::report_file() const { return workdir + "/report.tsv"; }

void load_config_stream(std::istream& in, PipelineConfig* cfg) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const size_t eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "config line " + std::to_string(line_no) +
                                         ": expected key = value");
    }
    const std::string key(trim(content.substr(0, eq)));
    const std::string value(trim(content.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorCode::Config,
                  "config line " + std::to_string(line_no) + ": empty key");
    }
    cfg->apply(key, value);
  }
}

void load_config_file(const std::string& path, PipelineConfig* cfg) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open config file: " + path);
  }
  load_config_stream(in, cfg);
}

}  // namespace ontorec
