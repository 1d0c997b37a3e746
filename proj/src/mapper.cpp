#include "ontorec/mapper.hpp"

#include <istream>
#include <ostream>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

SequenceDatabase::SequenceDatabase(std::vector<SemanticSequence> sequences) {
  for (SemanticSequence& sequence : sequences) add(std::move(sequence));
}

void SequenceDatabase::add(SemanticSequence sequence) {
  for (const SemanticObject& object : sequence.objects) {
    universe_.insert(object.instance);
  }
  sequences_.push_back(std::move(sequence));
}

std::optional<SemanticSequence> map_session(const Session& session,
                                            const AnnotationMap& ann,
                                            const MapOptions& opts) {
  SemanticSequence sequence;
  sequence.session_id = session.session_id;
  for (const PageView& view : session.page_views) {
    const auto* instances = ann.find(view.url);
    if (!instances) continue;
    for (const std::string& instance : *instances) {
      if (opts.collapse_consecutive_duplicates && !sequence.objects.empty() &&
          sequence.objects.back().instance == instance) {
        continue;
      }
      sequence.objects.push_back({view.url, instance});
    }
  }
  if (sequence.objects.empty()) return std::nullopt;
  return sequence;
}

SequenceDatabase build_sequence_database(const std::vector<Session>& sessions,
                                         const AnnotationMap& ann,
                                         size_t min_len,
                                         const MapOptions& opts) {
  if (min_len < 1) {
    throw Error(ErrorCode::Config, "min_len must be at least 1");
  }
  SequenceDatabase db;
  for (const Session& session : sessions) {
    auto sequence = map_session(session, ann, opts);
    if (sequence && sequence->objects.size() >= min_len) {
      db.add(std::move(*sequence));
    }
  }
  return db;
}

std::vector<std::string> map_url_history(const std::vector<std::string>& urls,
                                         const AnnotationMap& ann,
                                         const MapOptions& opts) {
  Session active;
  active.session_id = "active";
  for (const std::string& url : urls) active.page_views.push_back({url, 0});
  const auto sequence = map_session(active, ann, opts);
  std::vector<std::string> history;
  if (sequence) {
    history.reserve(sequence->objects.size());
    for (const SemanticObject& object : sequence->objects) {
      history.push_back(object.instance);
    }
  }
  return history;
}

void write_sequence_database(std::ostream& out, const SequenceDatabase& db) {
  for (const SemanticSequence& sequence : db.sequences()) {
    out << escape_field(sequence.session_id) << '\t';
    for (size_t i = 0; i < sequence.objects.size(); ++i) {
      if (i > 0) out << ' ';
      out << sequence.objects[i].instance;
    }
    out << '\n';
  }
}

SequenceDatabase read_sequence_database(std::istream& in) {
  SequenceDatabase db;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::Syntax,
                  "sequence file line " + std::to_string(line_no) +
                      ": expected session_id TAB instances");
    }
    SemanticSequence sequence;
    sequence.session_id = unescape_field(fields[0]);
    for (const std::string& instance : split_ws(fields[1])) {
      sequence.objects.push_back({"", instance});
    }
    if (sequence.objects.empty()) {
      throw Error(ErrorCode::Syntax, "sequence file line " +
                                         std::to_string(line_no) +
                                         ": no instances");
    }
    db.add(std::move(sequence));
  }
  return db;
}

}  // namespace ontorec
