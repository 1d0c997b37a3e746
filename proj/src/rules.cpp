#include "ontorec/rules.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

namespace {

// instance ids cannot contain control characters, so 0x1F is a safe joiner
std::string antecedent_key(const std::vector<std::string>& antecedent) {
  std::string key;
  for (const std::string& item : antecedent) {
    key += item;
    key += '\x1f';
  }
  return key;
}

bool rule_order(const SequentialRule& a, const SequentialRule& b) {
  if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
  return a.consequent < b.consequent;
}

}  // namespace

RuleBase::RuleBase(std::vector<SequentialRule> rules, RuleParams params)
    : rules_(std::move(rules)), params_(params) {
  std::sort(rules_.begin(), rules_.end(), rule_order);
  for (size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i].antecedent == rules_[i - 1].antecedent &&
        rules_[i].consequent == rules_[i - 1].consequent) {
      throw Error(ErrorCode::Config,
                  "duplicate rule: " + join(rules_[i].antecedent, " ") +
                      " -> " + rules_[i].consequent);
    }
  }
  index_.reserve(rules_.size());
  for (size_t i = 0; i < rules_.size(); ++i) {
    index_[antecedent_key(rules_[i].antecedent)].push_back(
        static_cast<uint32_t>(i));
  }
}

std::span<const uint32_t> RuleBase::find(
    const std::vector<std::string>& antecedent) const {
  const auto it = index_.find(antecedent_key(antecedent));
  if (it == index_.end()) return {};
  return it->second;
}

RuleBase generate_rules(const std::vector<FrequentSequence>& frequents,
                        double min_conf, const MinerParams& miner_params) {
  std::map<std::vector<std::string>, uint64_t> supports;
  for (const FrequentSequence& f : frequents) {
    supports[f.items] = f.support_count;
  }

  std::vector<SequentialRule> rules;
  for (const FrequentSequence& f : frequents) {
    if (f.items.size() < 2) continue;
    std::vector<std::string> antecedent(f.items.begin(), f.items.end() - 1);
    const auto it = supports.find(antecedent);
    if (it == supports.end() || it->second == 0) {
      throw Error(ErrorCode::MissingPrefixSupport,
                  "no support recorded for prefix: " + join(antecedent, " "));
    }
    const double confidence =
        static_cast<double>(f.support_count) / static_cast<double>(it->second);
    if (confidence + 1e-12 < min_conf) continue;
    rules.push_back(
        {std::move(antecedent), f.items.back(), f.support, confidence});
  }
  return RuleBase(std::move(rules),
                  {miner_params.min_sup, miner_params.delta, min_conf});
}

namespace {

struct Hit {
  double confidence = 0.0;
  size_t antecedent_length = 0;
  int distance = 0;
  std::string consequent;
};

}  // namespace

std::vector<Recommendation> recommend_instances(
    const std::vector<std::string>& history, const RuleBase& rb,
    const AnnotationMap& ann, const SemanticDistanceMatrix& matrix,
    const RecommendOptions& opts) {
  if (history.empty()) {
    throw Error(ErrorCode::EmptyHistory, "no instance survives the mapping");
  }
  if (opts.window < 1) {
    throw Error(ErrorCode::Config, "window must be at least 1");
  }

  const size_t window_len = std::min(opts.window, history.size());
  const std::set<std::string> window_set(history.end() - window_len,
                                         history.end());

  // search patterns: suffixes of the history, most recent item first, each
  // iteration extending one item further back
  std::map<std::string, Hit> best;
  std::vector<std::string> pattern;
  for (size_t len = 1; len <= window_len; ++len) {
    pattern.assign(history.end() - len, history.end());
    for (const uint32_t idx : rb.find(pattern)) {
      const SequentialRule& rule = rb.rules()[idx];
      if (rule.confidence + 1e-12 < opts.threshold) continue;
      if (window_set.count(rule.consequent)) continue;
      const Hit hit{rule.confidence, rule.antecedent.size(),
                    matrix.distance(rule.antecedent.back(), rule.consequent),
                    rule.consequent};
      auto [it, inserted] = best.try_emplace(rule.consequent, hit);
      if (!inserted) {
        // one entry per consequent: higher confidence wins, then the more
        // specific (longer) antecedent
        Hit& held = it->second;
        if (hit.confidence > held.confidence ||
            (hit.confidence == held.confidence &&
             hit.antecedent_length > held.antecedent_length)) {
          held = hit;
        }
      }
    }
  }

  std::vector<Hit> hits;
  hits.reserve(best.size());
  for (const auto& [consequent, hit] : best) hits.push_back(hit);
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.consequent < b.consequent;
  });

  std::vector<Recommendation> out;
  for (const Hit& hit : hits) {
    if (out.size() == opts.max_results) break;
    const auto& pages = ann.pages_of(hit.consequent);
    if (pages.empty()) continue;  // instance backs no page
    out.push_back({pages, hit.consequent, hit.confidence,
                   hit.antecedent_length, hit.distance});
  }
  return out;
}

std::vector<Recommendation> recommend(const std::vector<std::string>& active_urls,
                                      const RuleBase& rb,
                                      const AnnotationMap& ann,
                                      const SemanticDistanceMatrix& matrix,
                                      const RecommendOptions& opts) {
  const auto history = map_url_history(active_urls, ann, opts.map);
  return recommend_instances(history, rb, ann, matrix, opts);
}

void save_rulebase(std::ostream& out, const RuleBase& rb) {
  const RuleParams& p = rb.params();
  out << "#ontorec-rules v1 min_sup=" << format_double(p.min_sup) << " delta="
      << (p.delta ? std::to_string(*p.delta) : std::string("inf"))
      << " min_conf=" << format_double(p.min_conf) << '\n';
  for (const SequentialRule& rule : rb.rules()) {
    out << join(rule.antecedent, " ") << '\t' << rule.consequent << '\t'
        << format_double(rule.rule_support) << '\t'
        << format_double(rule.confidence) << '\n';
  }
}

RuleBase load_rulebase(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::Syntax, "rule file is empty");
  }
  const auto tokens = split_ws(header);
  if (tokens.size() < 2 || tokens[0] != "#ontorec-rules") {
    throw Error(ErrorCode::Syntax, "missing rule file header");
  }
  if (tokens[1] != "v1") {
    throw Error(ErrorCode::FormatVersionMismatch,
                "unsupported rule file version '" + tokens[1] + "'");
  }
  RuleParams params;
  for (size_t i = 2; i < tokens.size(); ++i) {
    const auto kv = split(tokens[i], '=');
    if (kv.size() != 2) {
      throw Error(ErrorCode::Syntax, "bad header attribute '" + tokens[i] + "'");
    }
    if (kv[0] == "min_sup") {
      if (!parse_double(kv[1], &params.min_sup)) {
        throw Error(ErrorCode::Syntax, "bad min_sup in header");
      }
    } else if (kv[0] == "delta") {
      if (kv[1] == "inf") {
        params.delta = std::nullopt;
      } else {
        int64_t value = 0;
        if (!parse_i64(kv[1], &value)) {
          throw Error(ErrorCode::Syntax, "bad delta in header");
        }
        params.delta = static_cast<int>(value);
      }
    } else if (kv[0] == "min_conf") {
      if (!parse_double(kv[1], &params.min_conf)) {
        throw Error(ErrorCode::Syntax, "bad min_conf in header");
      }
    } else {
      throw Error(ErrorCode::Syntax, "unknown header attribute '" + kv[0] + "'");
    }
  }

  std::vector<SequentialRule> rules;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    SequentialRule rule;
    if (fields.size() != 4 || !parse_double(fields[2], &rule.rule_support) ||
        !parse_double(fields[3], &rule.confidence)) {
      throw Error(ErrorCode::Syntax, "rule file line " +
                                         std::to_string(line_no) +
                                         ": bad record");
    }
    rule.antecedent = split_ws(fields[0]);
    rule.consequent = fields[1];
    if (rule.antecedent.empty() || rule.consequent.empty()) {
      throw Error(ErrorCode::Syntax, "rule file line " +
                                         std::to_string(line_no) +
                                         ": empty rule side");
    }
    rules.push_back(std::move(rule));
  }
  return RuleBase(std::move(rules), params);
}

}  // namespace ontorec
