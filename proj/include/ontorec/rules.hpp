#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ontorec/mapper.hpp"
#include "ontorec/miner.hpp"
#include "ontorec/ontology.hpp"

namespace ontorec {

struct SequentialRule {
  std::vector<std::string> antecedent;
  std::string consequent;
  double rule_support = 0.0;  // support of antecedent ⊕ consequent
  double confidence = 0.0;

  friend bool operator==(const SequentialRule&, const SequentialRule&) = default;
};

struct RuleParams {
  double min_sup = 0.0;
  std::optional<int> delta;
  double min_conf = 0.0;

  friend bool operator==(const RuleParams&, const RuleParams&) = default;
};

// Immutable after construction. Rules are kept sorted by (antecedent,
// consequent) and indexed for exact antecedent lookup.
class RuleBase {
 public:
  RuleBase() = default;
  RuleBase(std::vector<SequentialRule> rules, RuleParams params);

  const std::vector<SequentialRule>& rules() const { return rules_; }
  const RuleParams& params() const { return params_; }
  size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  // Indices of rules whose antecedent equals the pattern exactly.
  std::span<const uint32_t> find(const std::vector<std::string>& antecedent) const;

  friend bool operator==(const RuleBase& a, const RuleBase& b) {
    return a.rules_ == b.rules_ && a.params_ == b.params_;
  }

 private:
  std::vector<SequentialRule> rules_;
  RuleParams params_;
  std::unordered_map<std::string, std::vector<uint32_t>> index_;
};

// One rule prefix -> last item per frequent sequence of length >= 2,
// confidence = support(s) / support(prefix). miner_params are recorded in the
// rule base header. Throws when a prefix's support is missing.
RuleBase generate_rules(const std::vector<FrequentSequence>& frequents,
                        double min_conf, const MinerParams& miner_params = {});

struct Recommendation {
  std::vector<std::string> pages;  // every url annotated with the instance
  std::string instance;
  double confidence = 0.0;
  size_t matched_antecedent_length = 0;
  int tiebreak_distance = 0;  // distance(last antecedent item, consequent)
};

struct RecommendOptions {
  size_t window = 2;        // max pattern length tried against the history
  double threshold = 0.0;   // min rule confidence at recommendation time
  size_t max_results = 10;
  MapOptions map;
};

// History given as ontology instances, most recent last. Suffix patterns of
// length 1..window are matched exactly against rule antecedents; collected
// rules are deduplicated per consequent (highest confidence wins), consequents
// already inside the window are suppressed, and the rest are ranked by
// (confidence desc, semantic distance asc, consequent id asc).
std::vector<Recommendation> recommend_instances(
    const std::vector<std::string>& history, const RuleBase& rb,
    const AnnotationMap& ann, const SemanticDistanceMatrix& matrix,
    const RecommendOptions& opts);

// Url-level entry: the visited urls go through the semantic mapper's rules
// first. Throws EmptyHistory when no url maps to an instance.
std::vector<Recommendation> recommend(const std::vector<std::string>& active_urls,
                                      const RuleBase& rb,
                                      const AnnotationMap& ann,
                                      const SemanticDistanceMatrix& matrix,
                                      const RecommendOptions& opts);

// Versioned header followed by one rule per line, sorted by (antecedent,
// consequent). Numbers round-trip exactly.
void save_rulebase(std::ostream& out, const RuleBase& rb);
RuleBase load_rulebase(std::istream& in);

}  // namespace ontorec
