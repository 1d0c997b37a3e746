#pragma once

#include <cstdint>
#include <string>

namespace ontorec {

// Statistics-matched synthetic corpus: a three-level concept hierarchy
// (root -> categories -> product concepts), one instance and one url per
// product, and sessions generated as category-biased random walks. Distances
// between product instances are 0 (same product concept), 2 (same category)
// or 4 (different categories).
struct SyntheticConfig {
  size_t product_count = 300;
  size_t category_count = 60;
  size_t session_count = 1600;
  double mean_session_length = 4.0;
  double intra_category_bias = 0.7;  // chance the walk stays in its category
  double crawler_fraction = 0.05;    // crawler lines added per content line
  uint64_t seed = 42;
};

struct SyntheticCorpus {
  std::string ontology_text;
  std::string annotations_text;
  std::string log_text;  // Combined Log Format, time ordered
};

// Byte-identical output for identical configs.
SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg);

}  // namespace ontorec
