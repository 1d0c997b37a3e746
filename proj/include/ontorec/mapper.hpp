#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ontorec/log.hpp"
#include "ontorec/ontology.hpp"

namespace ontorec {

struct SemanticObject {
  std::string page;      // normalized url the instance was extracted from
  std::string instance;  // ontology instance identifier

  friend bool operator==(const SemanticObject&, const SemanticObject&) = default;
};

struct SemanticSequence {
  std::string session_id;
  std::vector<SemanticObject> objects;

  friend bool operator==(const SemanticSequence&, const SemanticSequence&) = default;
};

struct MapOptions {
  bool collapse_consecutive_duplicates = true;
};

class SequenceDatabase {
 public:
  SequenceDatabase() = default;
  explicit SequenceDatabase(std::vector<SemanticSequence> sequences);

  void add(SemanticSequence sequence);

  const std::vector<SemanticSequence>& sequences() const { return sequences_; }
  const std::set<std::string>& instance_universe() const { return universe_; }
  size_t size() const { return sequences_.size(); }
  bool empty() const { return sequences_.empty(); }

 private:
  std::vector<SemanticSequence> sequences_;
  std::set<std::string> universe_;
};

// Annotated urls expand to their instance lists in order, unannotated urls
// drop out, consecutive duplicate instances collapse to one (unless turned
// off). nullopt when nothing survives.
std::optional<SemanticSequence> map_session(const Session& session,
                                            const AnnotationMap& ann,
                                            const MapOptions& opts = {});

SequenceDatabase build_sequence_database(const std::vector<Session>& sessions,
                                         const AnnotationMap& ann,
                                         size_t min_len = 2,
                                         const MapOptions& opts = {});

// Instance history of an active session's urls, same mapping rules as
// map_session. Empty when nothing maps.
std::vector<std::string> map_url_history(const std::vector<std::string>& urls,
                                         const AnnotationMap& ann,
                                         const MapOptions& opts = {});

// Line format: session_id TAB inst1 inst2 ...  Page urls are not stored;
// sequences read back carry empty page fields.
void write_sequence_database(std::ostream& out, const SequenceDatabase& db);
SequenceDatabase read_sequence_database(std::istream& in);

}  // namespace ontorec
