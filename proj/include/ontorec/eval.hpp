#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "ontorec/mapper.hpp"
#include "ontorec/miner.hpp"
#include "ontorec/ontology.hpp"
#include "ontorec/rules.hpp"

namespace ontorec {

struct FoldSplit {
  std::vector<size_t> train;  // indices into the database
  std::vector<size_t> test;
};

// Seeded shuffle, fold sizes differ by at most one, every index lands in
// exactly one test fold. Throws when count < k.
std::vector<FoldSplit> kfold_split(size_t count, size_t k, uint64_t seed);

// |rec ∩ eval| / |rec|; rec must be non-empty.
double precision(const std::set<std::string>& rec,
                 const std::set<std::string>& eval_part);

// |rec ∩ eval| / |eval|; eval must be non-empty.
double coverage(const std::set<std::string>& rec,
                const std::set<std::string>& eval_part);

struct EvalSplit {
  std::vector<SemanticObject> window;     // first n objects
  std::vector<SemanticObject> eval_part;  // remainder
};

EvalSplit split_transaction(const SemanticSequence& transaction, size_t n);

struct EvalRow {
  double threshold = 0.0;
  double mean_precision = 0.0;
  double mean_coverage = 0.0;
  uint64_t scored = 0;   // transactions evaluated (length > window)
  uint64_t skipped = 0;  // transactions too short to split

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // one per threshold, ascending
  size_t folds = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct SweepConfig {
  MinerParams miner;
  double min_conf = 0.0;  // rule-base floor; thresholds re-filter at serve time
  size_t window = 2;
  size_t max_results = 10;
  size_t folds = 10;
  std::vector<double> thresholds;  // ascending
  uint64_t seed = 0;
};

// Cross-validated sweep: per fold, mine rules on the train part, then score
// every test transaction longer than the window at each threshold. Transactions
// with an empty recommendation set keep coverage 0 but stay out of the
// precision mean. Fold means are averaged over folds that scored anything.
// Throws when no transaction anywhere could be scored.
EvalReport run_sweep(const SequenceDatabase& db,
                     const SemanticDistanceMatrix& matrix,
                     const AnnotationMap& ann, const SweepConfig& cfg);

// Table: threshold TAB precision TAB coverage TAB n_scored TAB n_skipped,
// preceded by a single '#' comment header.
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace ontorec
