#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ontorec/mapper.hpp"
#include "ontorec/ontology.hpp"

namespace ontorec {

struct MinerParams {
  double min_sup = 0.01;        // relative support, (0, 1]
  std::optional<int> delta;     // max semantic distance; nullopt = no pruning
  std::optional<size_t> max_len;
  // Whether candidates may repeat an item (⟨a,a⟩). Off when the mapper
  // collapsed consecutive duplicates upstream.
  bool allow_repeats = true;
};

struct FrequentSequence {
  std::vector<std::string> items;
  uint64_t support_count = 0;
  double support = 0.0;  // support_count / |db|

  friend bool operator==(const FrequentSequence&, const FrequentSequence&) = default;
};

// True iff pattern occurs in sequence in order, not necessarily contiguously.
template <typename T>
bool is_subsequence(const std::vector<T>& pattern, const std::vector<T>& sequence) {
  size_t at = 0;
  for (const T& item : sequence) {
    if (at == pattern.size()) break;
    if (item == pattern[at]) ++at;
  }
  return at == pattern.size();
}

// Sequence-level support per candidate: each database sequence counts a
// candidate at most once. Returned counts align with the input order.
std::vector<uint64_t> count_support(
    const std::vector<std::vector<std::string>>& candidates,
    const SequenceDatabase& db);

// GSP join of the (k-1)-frequent set with itself: P joined with Q when
// drop-first(P) == drop-last(Q); the glued pair must sit within delta.
// All members of prev must share one length. Output sorted, duplicate free.
std::vector<std::vector<std::string>> apriori_join(
    const std::vector<FrequentSequence>& prev,
    const SemanticDistanceMatrix& matrix, std::optional<int> delta,
    bool allow_repeats = true);

// Level-wise mining over instance sequences with semantic-distance pruning.
// Output sorted by (length, lexicographic items). Throws on an empty db.
std::vector<FrequentSequence> onto_spm(const SequenceDatabase& db,
                                       const SemanticDistanceMatrix& matrix,
                                       const MinerParams& params);

// Line format: inst1 inst2 ... TAB support_count TAB support
void write_frequents(std::ostream& out,
                     const std::vector<FrequentSequence>& frequents);
std::vector<FrequentSequence> read_frequents(std::istream& in);

}  // namespace ontorec
