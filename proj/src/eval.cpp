#include "ontorec/eval.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "ontorec/errors.hpp"
#include "ontorec/rng.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

std::vector<FoldSplit> kfold_split(size_t count, size_t k, uint64_t seed) {
  if (k < 2) {
    throw Error(ErrorCode::Config, "fold count must be at least 2");
  }
  if (count < k) {
    throw Error(ErrorCode::TooFewSequences,
                "need at least " + std::to_string(k) + " sequences, have " +
                    std::to_string(count));
  }
  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(order, rng);

  std::vector<FoldSplit> folds(k);
  for (size_t i = 0; i < count; ++i) {
    folds[i % k].test.push_back(order[i]);
  }
  for (size_t f = 0; f < k; ++f) {
    std::sort(folds[f].test.begin(), folds[f].test.end());
    for (size_t g = 0; g < k; ++g) {
      if (g == f) continue;
      folds[f].train.insert(folds[f].train.end(), folds[g].test.begin(),
                            folds[g].test.end());
    }
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

double precision(const std::set<std::string>& rec,
                 const std::set<std::string>& eval_part) {
  if (rec.empty()) {
    throw Error(ErrorCode::Config, "precision undefined for an empty Rec set");
  }
  size_t hits = 0;
  for (const std::string& url : rec) hits += eval_part.count(url);
  return static_cast<double>(hits) / static_cast<double>(rec.size());
}

double coverage(const std::set<std::string>& rec,
                const std::set<std::string>& eval_part) {
  if (eval_part.empty()) {
    throw Error(ErrorCode::Config, "coverage undefined for an empty Eval set");
  }
  size_t hits = 0;
  for (const std::string& url : rec) hits += eval_part.count(url);
  return static_cast<double>(hits) / static_cast<double>(eval_part.size());
}

EvalSplit split_transaction(const SemanticSequence& transaction, size_t n) {
  EvalSplit split;
  const size_t cut = std::min(n, transaction.objects.size());
  split.window.assign(transaction.objects.begin(),
                      transaction.objects.begin() + cut);
  split.eval_part.assign(transaction.objects.begin() + cut,
                         transaction.objects.end());
  return split;
}

EvalReport run_sweep(const SequenceDatabase& db,
                     const SemanticDistanceMatrix& matrix,
                     const AnnotationMap& ann, const SweepConfig& cfg) {
  if (cfg.thresholds.empty()) {
    throw Error(ErrorCode::Config, "threshold sweep is empty");
  }
  if (!std::is_sorted(cfg.thresholds.begin(), cfg.thresholds.end())) {
    throw Error(ErrorCode::Config, "thresholds must be ascending");
  }
  if (cfg.window < 1) {
    throw Error(ErrorCode::Config, "window must be at least 1");
  }

  const auto folds = kfold_split(db.size(), cfg.folds, cfg.seed);
  const size_t nt = cfg.thresholds.size();

  std::vector<double> precision_fold_sum(nt, 0.0);
  std::vector<size_t> precision_folds(nt, 0);
  std::vector<double> coverage_fold_sum(nt, 0.0);
  std::vector<size_t> coverage_folds(nt, 0);
  uint64_t total_scored = 0;
  uint64_t total_skipped = 0;
  bool any_rules = false;

  for (const FoldSplit& fold : folds) {
    std::vector<SemanticSequence> train_sequences;
    train_sequences.reserve(fold.train.size());
    for (const size_t idx : fold.train) {
      train_sequences.push_back(db.sequences()[idx]);
    }
    const SequenceDatabase train(std::move(train_sequences));
    const auto frequents = onto_spm(train, matrix, cfg.miner);
    const RuleBase rules = generate_rules(frequents, cfg.min_conf, cfg.miner);
    if (!rules.empty()) any_rules = true;

    std::vector<double> precision_sum(nt, 0.0);
    std::vector<uint64_t> precision_n(nt, 0);
    std::vector<double> coverage_sum(nt, 0.0);
    uint64_t scored = 0;

    for (const size_t idx : fold.test) {
      const SemanticSequence& transaction = db.sequences()[idx];
      if (transaction.objects.size() <= cfg.window) {
        ++total_skipped;
        continue;
      }
      const EvalSplit split = split_transaction(transaction, cfg.window);
      std::vector<std::string> history;
      history.reserve(split.window.size());
      for (const SemanticObject& object : split.window) {
        history.push_back(object.instance);
      }
      std::set<std::string> eval_urls;
      for (const SemanticObject& object : split.eval_part) {
        if (!object.page.empty()) eval_urls.insert(object.page);
      }
      if (eval_urls.empty()) {
        // page information missing (e.g. a db re-read from the instance-only
        // sequence file) leaves nothing to compare at url level
        ++total_skipped;
        continue;
      }
      ++scored;

      RecommendOptions opts;
      opts.window = cfg.window;
      opts.max_results = cfg.max_results;
      for (size_t t = 0; t < nt; ++t) {
        opts.threshold = cfg.thresholds[t];
        const auto recs =
            recommend_instances(history, rules, ann, matrix, opts);
        std::set<std::string> rec_urls;
        for (const Recommendation& rec : recs) {
          rec_urls.insert(rec.pages.begin(), rec.pages.end());
        }
        if (!rec_urls.empty()) {
          precision_sum[t] += precision(rec_urls, eval_urls);
          ++precision_n[t];
        }
        coverage_sum[t] += coverage(rec_urls, eval_urls);
      }
    }

    total_scored += scored;
    for (size_t t = 0; t < nt; ++t) {
      if (precision_n[t] > 0) {
        precision_fold_sum[t] +=
            precision_sum[t] / static_cast<double>(precision_n[t]);
        ++precision_folds[t];
      }
      if (scored > 0) {
        coverage_fold_sum[t] += coverage_sum[t] / static_cast<double>(scored);
        ++coverage_folds[t];
      }
    }
  }

  if (total_scored == 0) {
    throw Error(ErrorCode::NoScorableTransactions,
                "no test transaction could be scored");
  }
  if (!any_rules) {
    throw Error(ErrorCode::NoScorableTransactions,
                "every fold produced an empty rule base");
  }

  EvalReport report;
  report.folds = folds.size();
  report.rows.reserve(nt);
  for (size_t t = 0; t < nt; ++t) {
    EvalRow row;
    row.threshold = cfg.thresholds[t];
    row.mean_precision =
        precision_folds[t] > 0
            ? precision_fold_sum[t] / static_cast<double>(precision_folds[t])
            : 0.0;
    row.mean_coverage =
        coverage_folds[t] > 0
            ? coverage_fold_sum[t] / static_cast<double>(coverage_folds[t])
            : 0.0;
    row.scored = total_scored;
    row.skipped = total_skipped;
    report.rows.push_back(row);
  }
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) {
  out << "#threshold\tprecision\tcoverage\tn_scored\tn_skipped\n";
  for (const EvalRow& row : report.rows) {
    out << format_double(row.threshold) << '\t'
        << format_fixed6(row.mean_precision) << '\t'
        << format_fixed6(row.mean_coverage) << '\t' << row.scored << '\t'
        << row.skipped << '\n';
  }
}

}  // namespace ontorec
