#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace ontorec {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

struct Relation {
  std::string name;
  std::string source;
  std::string target;

  auto operator<=>(const Relation&) const = default;
};

// Concepts, the is-a hierarchy, named relations, opaque axioms and the
// instance-to-concept assignment. Axioms are stored verbatim and never
// interpreted.
class Ontology {
 public:
  void add_concept(const std::string& id);
  void add_isa(const std::string& child, const std::string& parent);
  void add_relation(const std::string& name, const std::string& source,
                    const std::string& target);
  void add_axiom(const std::string& text);
  void add_instance(const std::string& id, const std::string& concept_id);

  // Throws Error on an is-a cycle or a dangling concept reference.
  void validate() const;

  const std::set<std::string>& concepts() const { return concepts_; }
  const std::set<std::pair<std::string, std::string>>& isa_edges() const {
    return isa_;
  }
  const std::set<Relation>& relations() const { return relations_; }
  const std::vector<std::string>& axioms() const { return axioms_; }
  const std::map<std::string, std::string>& instances() const {
    return instances_;
  }

  bool has_concept(const std::string& id) const {
    return concepts_.count(id) > 0;
  }
  // nullptr when the instance is unknown
  const std::string* concept_of(const std::string& instance) const;

 private:
  std::set<std::string> concepts_;
  std::set<std::pair<std::string, std::string>> isa_;  // (child, parent)
  std::set<Relation> relations_;
  std::vector<std::string> axioms_;
  std::map<std::string, std::string> instances_;  // instance -> concept
};

Ontology load_ontology(std::istream& in);
Ontology load_ontology_text(const std::string& text);

// Canonical form: concepts, isa, rel sorted; axioms in declaration order;
// instances sorted. load(serialize(o)) == o.
std::string serialize_ontology(const Ontology& o);

// Shortest-path edge count between two concepts, is-a edges taken as
// undirected. kUnreachable when no path exists. Throws on unknown concepts.
int concept_distance(const Ontology& o, const std::string& c1,
                     const std::string& c2);

class SemanticDistanceMatrix {
 public:
  SemanticDistanceMatrix() = default;

  // Pairwise instance distances via the instances' concepts.
  static SemanticDistanceMatrix build(const Ontology& o);

  // Direct construction from a row-major dense matrix (tests, synthetic
  // setups). Must be symmetric with a zero diagonal.
  static SemanticDistanceMatrix from_dense(std::vector<std::string> instances,
                                           std::vector<int> dense);

  size_t size() const { return instances_.size(); }
  const std::vector<std::string>& instances() const { return instances_; }
  std::optional<size_t> index_of(const std::string& instance) const;

  // kUnreachable for unknown instances or disconnected concepts.
  int distance(const std::string& a, const std::string& b) const;
  int distance_at(size_t i, size_t j) const {
    return dense_[i * instances_.size() + j];
  }

 private:
  std::vector<std::string> instances_;  // sorted
  std::unordered_map<std::string, size_t> index_;
  std::vector<int> dense_;
};

// url -> ordered instance list, plus the reverse instance -> url view used
// when recommendations are turned back into pages.
class AnnotationMap {
 public:
  void add(const std::string& url, std::vector<std::string> instances);

  // nullptr when the url carries no annotation
  const std::vector<std::string>* find(const std::string& url) const;
  // urls annotated with the instance, sorted; empty when there are none
  const std::vector<std::string>& pages_of(const std::string& instance) const;

  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::map<std::string, std::vector<std::string>> reverse_;
};

AnnotationMap load_annotations(std::istream& in, const Ontology& o);
AnnotationMap load_annotations_text(const std::string& text, const Ontology& o);

}  // namespace ontorec
