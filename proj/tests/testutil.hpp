// Shared test helpers: brute-force mining oracle, random fixtures, tiny
// filesystem scratch space.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ontorec/mapper.hpp"
#include "ontorec/ontology.hpp"
#include "ontorec/rng.hpp"

namespace ontorec::testutil {

inline SequenceDatabase make_db(const std::vector<std::vector<std::string>>& rows) {
  SequenceDatabase db;
  for (size_t i = 0; i < rows.size(); ++i) {
    SemanticSequence sequence;
    sequence.session_id = "s" + std::to_string(i);
    for (const std::string& item : rows[i]) {
      sequence.objects.push_back({"/" + item, item});
    }
    db.add(sequence);
  }
  return db;
}

struct OracleEntry {
  std::vector<std::string> items;
  uint64_t count = 0;

  friend bool operator==(const OracleEntry&, const OracleEntry&) = default;
};

// Exhaustive reference miner, independent of the production code path: every
// ordered item list over the db universe up to max_len, support counted by an
// inline order-preserving subsequence scan. Patterns with support below the
// relative min_sup are dropped; output sorted by (length, items).
class BruteForceOracle {
 public:
  explicit BruteForceOracle(const SequenceDatabase& db) {
    universe_.assign(db.instance_universe().begin(),
                     db.instance_universe().end());
    for (const SemanticSequence& sequence : db.sequences()) {
      std::vector<uint32_t> ids;
      uint64_t mask = 0;
      for (const SemanticObject& object : sequence.objects) {
        const auto at = std::find(universe_.begin(), universe_.end(),
                                  object.instance);
        const auto id = static_cast<uint32_t>(at - universe_.begin());
        ids.push_back(id);
        mask |= uint64_t{1} << id;
      }
      sequences_.push_back(std::move(ids));
      masks_.push_back(mask);
    }
    db_size_ = db.size();
  }

  std::vector<OracleEntry> mine(double min_sup, size_t max_len) const {
    // smallest integer count with count / |db| >= min_sup
    const double exact = min_sup * static_cast<double>(db_size_);
    auto threshold = static_cast<uint64_t>(exact);
    while (static_cast<double>(threshold) < exact - 1e-9) ++threshold;
    if (threshold < 1) threshold = 1;

    std::vector<OracleEntry> out;
    std::vector<uint32_t> pattern;
    enumerate(pattern, 0, max_len, threshold, &out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.items.size() != b.items.size()) {
        return a.items.size() < b.items.size();
      }
      return a.items < b.items;
    });
    return out;
  }

 private:
  void enumerate(std::vector<uint32_t>& pattern, uint64_t pattern_mask,
                 size_t max_len, uint64_t threshold,
                 std::vector<OracleEntry>* out) const {
    if (pattern.size() == max_len) return;
    for (uint32_t id = 0; id < universe_.size(); ++id) {
      pattern.push_back(id);
      const uint64_t mask = pattern_mask | (uint64_t{1} << id);
      uint64_t count = 0;
      for (size_t s = 0; s < sequences_.size(); ++s) {
        if ((mask & ~masks_[s]) != 0) continue;
        if (occurs(pattern, sequences_[s])) ++count;
      }
      if (count >= threshold) {
        OracleEntry entry;
        for (const uint32_t item : pattern) entry.items.push_back(universe_[item]);
        entry.count = count;
        out->push_back(std::move(entry));
      }
      // no pruning on sub-threshold prefixes: this stays a plain enumeration
      enumerate(pattern, mask, max_len, threshold, out);
      pattern.pop_back();
    }
  }

  static bool occurs(const std::vector<uint32_t>& pattern,
                     const std::vector<uint32_t>& sequence) {
    size_t at = 0;
    for (const uint32_t item : sequence) {
      if (at == pattern.size()) break;
      if (item == pattern[at]) ++at;
    }
    return at == pattern.size();
  }

  std::vector<std::string> universe_;
  std::vector<std::vector<uint32_t>> sequences_;
  std::vector<uint64_t> masks_;
  size_t db_size_ = 0;
};

// Random database over up to max_universe single-letter instances.
inline SequenceDatabase random_db(Rng& rng, size_t max_sequences = 20,
                                  size_t max_universe = 8,
                                  size_t max_length = 6) {
  const size_t universe = 1 + rng.below(max_universe);
  const size_t count = 1 + rng.below(max_sequences);
  std::vector<std::vector<std::string>> rows(count);
  for (auto& row : rows) {
    const size_t length = 1 + rng.below(max_length);
    for (size_t i = 0; i < length; ++i) {
      row.push_back(std::string(1, static_cast<char>('a' + rng.below(universe))));
    }
  }
  return make_db(rows);
}

// Symmetric random distances in {0..max_distance} over the db universe.
inline SemanticDistanceMatrix random_matrix(Rng& rng, const SequenceDatabase& db,
                                            int max_distance = 5) {
  std::vector<std::string> instances(db.instance_universe().begin(),
                                     db.instance_universe().end());
  const size_t n = instances.size();
  std::vector<int> dense(n * n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const int d = static_cast<int>(rng.below(max_distance + 1));
      dense[i * n + j] = d;
      dense[j * n + i] = d;
    }
  }
  return SemanticDistanceMatrix::from_dense(std::move(instances), std::move(dense));
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ontorec_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace ontorec::testutil
