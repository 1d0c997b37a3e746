#include "ontorec/miner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

namespace {

// Interned view of the database: ids are assigned in lexicographic order, so
// comparisons on id vectors match comparisons on the item strings.
struct InternedDb {
  std::vector<std::string> names;
  std::unordered_map<std::string, int32_t> ids;
  std::vector<std::vector<int32_t>> sequences;
  std::vector<std::vector<uint64_t>> masks;
  size_t words = 0;

  explicit InternedDb(const SequenceDatabase& db) {
    names.assign(db.instance_universe().begin(), db.instance_universe().end());
    ids.reserve(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
      ids[names[i]] = static_cast<int32_t>(i);
    }
    words = (names.size() + 63) / 64;
    sequences.reserve(db.size());
    masks.reserve(db.size());
    for (const SemanticSequence& sequence : db.sequences()) {
      std::vector<int32_t> items;
      items.reserve(sequence.objects.size());
      std::vector<uint64_t> mask(words, 0);
      for (const SemanticObject& object : sequence.objects) {
        const int32_t id = ids.at(object.instance);
        items.push_back(id);
        mask[static_cast<size_t>(id) >> 6] |= uint64_t{1} << (id & 63);
      }
      sequences.push_back(std::move(items));
      masks.push_back(std::move(mask));
    }
  }

  // negative when any item is unknown (the candidate cannot occur)
  std::vector<int32_t> intern(const std::vector<std::string>& items) const {
    std::vector<int32_t> out;
    out.reserve(items.size());
    for (const std::string& item : items) {
      const auto it = ids.find(item);
      if (it == ids.end()) return {};
      out.push_back(it->second);
    }
    return out;
  }
};

bool mask_subset(const std::vector<uint64_t>& needle,
                 const std::vector<uint64_t>& haystack) {
  for (size_t w = 0; w < needle.size(); ++w) {
    if (needle[w] & ~haystack[w]) return false;
  }
  return true;
}

// Distinct ordered in-sequence pairs resolve 2-candidates in one database
// pass instead of one subsequence scan per candidate.
void count_pairs(const std::vector<std::vector<int32_t>>& candidates,
                 const InternedDb& db, std::vector<uint64_t>* counts) {
  const auto key_of = [](int32_t a, int32_t b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
  };
  std::unordered_map<uint64_t, uint64_t> by_pair;
  by_pair.reserve(candidates.size());
  for (const auto& candidate : candidates) {
    if (!candidate.empty()) by_pair.emplace(key_of(candidate[0], candidate[1]), 0);
  }
  std::unordered_set<uint64_t> seen;
  for (const auto& sequence : db.sequences) {
    seen.clear();
    for (size_t i = 0; i + 1 < sequence.size(); ++i) {
      for (size_t j = i + 1; j < sequence.size(); ++j) {
        const uint64_t key = key_of(sequence[i], sequence[j]);
        const auto it = by_pair.find(key);
        if (it != by_pair.end() && seen.insert(key).second) ++it->second;
      }
    }
  }
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].empty()) {
      (*counts)[i] = by_pair.at(key_of(candidates[i][0], candidates[i][1]));
    }
  }
}

bool contains_interned(const std::vector<int32_t>& pattern,
                       const std::vector<int32_t>& sequence) {
  size_t at = 0;
  for (const int32_t item : sequence) {
    if (at == pattern.size()) break;
    if (item == pattern[at]) ++at;
  }
  return at == pattern.size();
}

uint64_t support_threshold(double min_sup, size_t db_size) {
  // smallest count satisfying count / |db| >= min_sup
  const double exact = min_sup * static_cast<double>(db_size);
  auto threshold = static_cast<uint64_t>(std::ceil(exact - 1e-9));
  return threshold < 1 ? 1 : threshold;
}

}  // namespace

std::vector<uint64_t> count_support(
    const std::vector<std::vector<std::string>>& candidates,
    const SequenceDatabase& db) {
  std::vector<uint64_t> counts(candidates.size(), 0);
  if (candidates.empty() || db.empty()) return counts;

  const InternedDb interned(db);
  std::vector<std::vector<int32_t>> cand;
  cand.reserve(candidates.size());
  bool all_pairs = true;
  for (const auto& candidate : candidates) {
    cand.push_back(interned.intern(candidate));
    if (candidate.size() != 2) all_pairs = false;
  }

  if (all_pairs) {
    count_pairs(cand, interned, &counts);
    return counts;
  }

  for (size_t i = 0; i < cand.size(); ++i) {
    if (cand[i].empty()) continue;  // unknown item somewhere
    std::vector<uint64_t> mask(interned.words, 0);
    for (const int32_t id : cand[i]) {
      mask[static_cast<size_t>(id) >> 6] |= uint64_t{1} << (id & 63);
    }
    for (size_t s = 0; s < interned.sequences.size(); ++s) {
      if (!mask_subset(mask, interned.masks[s])) continue;
      if (contains_interned(cand[i], interned.sequences[s])) ++counts[i];
    }
  }
  return counts;
}

std::vector<std::vector<std::string>> apriori_join(
    const std::vector<FrequentSequence>& prev,
    const SemanticDistanceMatrix& matrix, std::optional<int> delta,
    bool allow_repeats) {
  if (prev.empty()) return {};
  const size_t len = prev.front().items.size();
  for (const FrequentSequence& f : prev) {
    if (f.items.size() != len || f.items.empty()) {
      throw Error(ErrorCode::Config,
                  "apriori_join input must share one non-zero length");
    }
  }

  // drop-last(Q) -> the last items of the Qs sharing that prefix
  std::map<std::vector<std::string>, std::vector<const std::string*>> by_prefix;
  for (const FrequentSequence& q : prev) {
    std::vector<std::string> key(q.items.begin(), q.items.end() - 1);
    by_prefix[std::move(key)].push_back(&q.items.back());
  }

  // Every contiguous (k-1)-window of a k-candidate is P or Q itself, so the
  // Apriori window prune is satisfied by construction.
  std::vector<std::vector<std::string>> candidates;
  std::vector<std::string> key;
  for (const FrequentSequence& p : prev) {
    key.assign(p.items.begin() + 1, p.items.end());
    const auto it = by_prefix.find(key);
    if (it == by_prefix.end()) continue;
    const std::string& glue_left = p.items.back();
    for (const std::string* tail : it->second) {
      if (!allow_repeats && glue_left == *tail) continue;
      if (delta && matrix.distance(glue_left, *tail) > *delta) continue;
      std::vector<std::string> candidate = p.items;
      candidate.push_back(*tail);
      candidates.push_back(std::move(candidate));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  return candidates;
}

std::vector<FrequentSequence> onto_spm(const SequenceDatabase& db,
                                       const SemanticDistanceMatrix& matrix,
                                       const MinerParams& params) {
  if (db.empty()) {
    throw Error(ErrorCode::EmptyDatabase, "sequence database is empty");
  }
  if (!(params.min_sup > 0.0 && params.min_sup <= 1.0)) {
    throw Error(ErrorCode::Config, "min_sup must be in (0, 1]");
  }
  if (params.max_len && *params.max_len < 1) {
    throw Error(ErrorCode::Config, "max_len must be at least 1");
  }
  if (params.delta && *params.delta < 0) {
    throw Error(ErrorCode::Config, "delta must be non-negative");
  }

  const size_t n = db.size();
  const uint64_t threshold = support_threshold(params.min_sup, n);

  // frequent 1-sequences from a single scan
  std::map<std::string, uint64_t> item_counts;
  for (const SemanticSequence& sequence : db.sequences()) {
    std::set<std::string> distinct;
    for (const SemanticObject& object : sequence.objects) {
      distinct.insert(object.instance);
    }
    for (const std::string& item : distinct) ++item_counts[item];
  }

  std::vector<FrequentSequence> result;
  std::vector<FrequentSequence> level;
  for (const auto& [item, count] : item_counts) {
    if (count >= threshold) {
      level.push_back({{item}, count, static_cast<double>(count) / n});
    }
  }
  result = level;

  for (size_t k = 2; !level.empty(); ++k) {
    if (params.max_len && k > *params.max_len) break;
    const auto candidates =
        apriori_join(level, matrix, params.delta, params.allow_repeats);
    if (candidates.empty()) break;
    const auto counts = count_support(candidates, db);
    level.clear();
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (counts[i] >= threshold) {
        level.push_back(
            {candidates[i], counts[i], static_cast<double>(counts[i]) / n});
      }
    }
    result.insert(result.end(), level.begin(), level.end());
  }
  return result;
}

void write_frequents(std::ostream& out,
                     const std::vector<FrequentSequence>& frequents) {
  for (const FrequentSequence& f : frequents) {
    out << join(f.items, " ") << '\t' << f.support_count << '\t'
        << format_fixed6(f.support) << '\n';
  }
}

std::vector<FrequentSequence> read_frequents(std::istream& in) {
  std::vector<FrequentSequence> frequents;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    uint64_t count = 0;
    double support = 0.0;
    if (fields.size() != 3 || !parse_u64(fields[1], &count) ||
        !parse_double(fields[2], &support)) {
      throw Error(ErrorCode::Syntax, "frequents file line " +
                                         std::to_string(line_no) +
                                         ": bad record");
    }
    FrequentSequence f;
    f.items = split_ws(fields[0]);
    if (f.items.empty()) {
      throw Error(ErrorCode::Syntax, "frequents file line " +
                                         std::to_string(line_no) +
                                         ": no items");
    }
    f.support_count = count;
    f.support = support;
    frequents.push_back(std::move(f));
  }
  return frequents;
}

}  // namespace ontorec
