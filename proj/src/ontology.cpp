#include "ontorec/ontology.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

void Ontology::add_concept(const std::string& id) { concepts_.insert(id); }

void Ontology::add_isa(const std::string& child, const std::string& parent) {
  isa_.insert({child, parent});
}

void Ontology::add_relation(const std::string& name, const std::string& source,
                            const std::string& target) {
  relations_.insert({name, source, target});
}

void Ontology::add_axiom(const std::string& text) { axioms_.push_back(text); }

void Ontology::add_instance(const std::string& id, const std::string& concept_id) {
  instances_[id] = concept_id;
}

const std::string* Ontology::concept_of(const std::string& instance) const {
  const auto it = instances_.find(instance);
  return it == instances_.end() ? nullptr : &it->second;
}

void Ontology::validate() const {
  for (const auto& [child, parent] : isa_) {
    if (!has_concept(child) || !has_concept(parent)) {
      throw Error(ErrorCode::DanglingReference,
                  "isa edge references unknown concept: " + child + " -> " + parent);
    }
  }
  for (const Relation& rel : relations_) {
    if (!has_concept(rel.source) || !has_concept(rel.target)) {
      throw Error(ErrorCode::DanglingReference,
                  "relation '" + rel.name + "' references unknown concept");
    }
  }
  for (const auto& [instance, concept_id] : instances_) {
    if (!has_concept(concept_id)) {
      throw Error(ErrorCode::DanglingReference,
                  "instance '" + instance + "' names unknown concept '" + concept_id + "'");
    }
  }

  // Kahn's algorithm over child -> parent edges; leftovers mean a cycle.
  std::map<std::string, std::vector<std::string>> children;  // parent -> children
  std::map<std::string, size_t> out_degree;                  // edges toward parents
  for (const auto& [child, parent] : isa_) {
    children[parent].push_back(child);
    ++out_degree[child];
  }
  std::deque<std::string> roots;
  for (const std::string& concept_id : concepts_) {
    if (out_degree.find(concept_id) == out_degree.end()) roots.push_back(concept_id);
  }
  size_t settled = roots.size();
  while (!roots.empty()) {
    const std::string concept_id = roots.front();
    roots.pop_front();
    const auto it = children.find(concept_id);
    if (it == children.end()) continue;
    for (const std::string& child : it->second) {
      if (--out_degree[child] == 0) {
        roots.push_back(child);
        ++settled;
      }
    }
  }
  if (settled != concepts_.size()) {
    throw Error(ErrorCode::Cycle, "is-a hierarchy contains a cycle");
  }
}

Ontology load_ontology(std::istream& in) {
  Ontology o;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const auto tokens = split_ws(content);
    const auto want = [&](size_t n) {
      if (tokens.size() != n) {
        throw Error(ErrorCode::Syntax,
                    "ontology line " + std::to_string(line_no) + ": '" +
                        tokens[0] + "' expects " + std::to_string(n - 1) +
                        " arguments");
      }
    };
    if (tokens[0] == "concept") {
      want(2);
      o.add_concept(tokens[1]);
    } else if (tokens[0] == "isa") {
      want(3);
      o.add_isa(tokens[1], tokens[2]);
    } else if (tokens[0] == "rel") {
      want(4);
      o.add_relation(tokens[1], tokens[2], tokens[3]);
    } else if (tokens[0] == "axiom") {
      const size_t at = content.find("axiom") + 5;
      o.add_axiom(std::string(trim(content.substr(at))));
    } else if (tokens[0] == "instance") {
      want(3);
      o.add_instance(tokens[1], tokens[2]);
    } else {
      throw Error(ErrorCode::Syntax, "ontology line " + std::to_string(line_no) +
                                         ": unknown declaration '" + tokens[0] + "'");
    }
  }
  o.validate();
  return o;
}

Ontology load_ontology_text(const std::string& text) {
  std::istringstream in(text);
  return load_ontology(in);
}

std::string serialize_ontology(const Ontology& o) {
  std::ostringstream out;
  for (const std::string& concept_id : o.concepts()) {
    out << "concept " << concept_id << '\n';
  }
  for (const auto& [child, parent] : o.isa_edges()) {
    out << "isa " << child << ' ' << parent << '\n';
  }
  for (const Relation& rel : o.relations()) {
    out << "rel " << rel.name << ' ' << rel.source << ' ' << rel.target << '\n';
  }
  for (const std::string& axiom : o.axioms()) {
    out << "axiom " << axiom << '\n';
  }
  for (const auto& [instance, concept_id] : o.instances()) {
    out << "instance " << instance << ' ' << concept_id << '\n';
  }
  return out.str();
}

namespace {

// adjacency over interned concept ids, is-a edges undirected
struct ConceptGraph {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::vector<std::vector<int>> adjacency;

  explicit ConceptGraph(const Ontology& o) {
    names.assign(o.concepts().begin(), o.concepts().end());
    for (size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
    adjacency.resize(names.size());
    for (const auto& [child, parent] : o.isa_edges()) {
      const int c = index.at(child);
      const int p = index.at(parent);
      adjacency[c].push_back(p);
      adjacency[p].push_back(c);
    }
  }

  std::vector<int> bfs(int start) const {
    std::vector<int> dist(names.size(), kUnreachable);
    std::deque<int> queue{start};
    dist[start] = 0;
    while (!queue.empty()) {
      const int at = queue.front();
      queue.pop_front();
      for (const int next : adjacency[at]) {
        if (dist[next] == kUnreachable) {
          dist[next] = dist[at] + 1;
          queue.push_back(next);
        }
      }
    }
    return dist;
  }
};

}  // namespace

int concept_distance(const Ontology& o, const std::string& c1,
                     const std::string& c2) {
  if (!o.has_concept(c1)) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + c1 + "'");
  }
  if (!o.has_concept(c2)) {
    throw Error(ErrorCode::UnknownConcept, "unknown concept '" + c2 + "'");
  }
  if (c1 == c2) return 0;
  const ConceptGraph graph(o);
  return graph.bfs(graph.index.at(c1))[graph.index.at(c2)];
}

SemanticDistanceMatrix SemanticDistanceMatrix::build(const Ontology& o) {
  const ConceptGraph graph(o);

  std::vector<std::string> instances;
  instances.reserve(o.instances().size());
  std::vector<int> instance_concept;
  for (const auto& [instance, concept_id] : o.instances()) {
    instances.push_back(instance);
    instance_concept.push_back(graph.index.at(concept_id));
  }

  // all-pairs over concepts once, instances index into it
  const size_t c = graph.names.size();
  std::vector<int> concept_dist(c * c, 0);
  for (size_t i = 0; i < c; ++i) {
    const auto row = graph.bfs(static_cast<int>(i));
    std::copy(row.begin(), row.end(), concept_dist.begin() + i * c);
  }

  const size_t n = instances.size();
  std::vector<int> dense(n * n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      dense[i * n + j] =
          concept_dist[instance_concept[i] * c + instance_concept[j]];
    }
  }
  return from_dense(std::move(instances), std::move(dense));
}

SemanticDistanceMatrix SemanticDistanceMatrix::from_dense(
    std::vector<std::string> instances, std::vector<int> dense) {
  const size_t n = instances.size();
  if (dense.size() != n * n) {
    throw Error(ErrorCode::Config, "distance matrix size mismatch");
  }
  for (size_t i = 0; i < n; ++i) {
    if (dense[i * n + i] != 0) {
      throw Error(ErrorCode::Config, "distance matrix diagonal must be zero");
    }
    for (size_t j = i + 1; j < n; ++j) {
      if (dense[i * n + j] != dense[j * n + i]) {
        throw Error(ErrorCode::Config, "distance matrix must be symmetric");
      }
    }
  }
  SemanticDistanceMatrix m;
  m.instances_ = std::move(instances);
  m.dense_ = std::move(dense);
  for (size_t i = 0; i < m.instances_.size(); ++i) m.index_[m.instances_[i]] = i;
  return m;
}

std::optional<size_t> SemanticDistanceMatrix::index_of(
    const std::string& instance) const {
  const auto it = index_.find(instance);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int SemanticDistanceMatrix::distance(const std::string& a,
                                     const std::string& b) const {
  const auto i = index_of(a);
  const auto j = index_of(b);
  if (!i || !j) return kUnreachable;
  return distance_at(*i, *j);
}

void AnnotationMap::add(const std::string& url,
                        std::vector<std::string> instances) {
  for (const std::string& instance : instances) {
    auto& pages = reverse_[instance];
    const auto at = std::lower_bound(pages.begin(), pages.end(), url);
    if (at == pages.end() || *at != url) pages.insert(at, url);
  }
  entries_[url] = std::move(instances);
}

const std::vector<std::string>* AnnotationMap::find(const std::string& url) const {
  const auto it = entries_.find(url);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& AnnotationMap::pages_of(
    const std::string& instance) const {
  static const std::vector<std::string> kEmpty;
  const auto it = reverse_.find(instance);
  return it == reverse_.end() ? kEmpty : it->second;
}

AnnotationMap load_annotations(std::istream& in, const Ontology& o) {
  AnnotationMap map;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const auto fields = split(content, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::Syntax,
                  "annotation line " + std::to_string(line_no) +
                      ": expected url TAB instance list");
    }
    std::vector<std::string> instances = split(fields[1], ',');
    for (std::string& instance : instances) {
      instance = std::string(trim(instance));
      if (instance.empty()) {
        throw Error(ErrorCode::Syntax, "annotation line " + std::to_string(line_no) +
                                           ": empty instance id");
      }
      if (!o.concept_of(instance)) {
        throw Error(ErrorCode::DanglingReference,
                    "annotation line " + std::to_string(line_no) +
                        ": unknown instance '" + instance + "'");
      }
    }
    map.add(std::string(trim(fields[0])), std::move(instances));
  }
  return map;
}

AnnotationMap load_annotations_text(const std::string& text, const Ontology& o) {
  std::istringstream in(text);
  return load_annotations(in, o);
}

}  // namespace ontorec
