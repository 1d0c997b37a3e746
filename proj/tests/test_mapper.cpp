#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ontorec/mapper.hpp"

using namespace ontorec;

namespace {

struct Fixture {
  Ontology ontology = load_ontology_text(
      "concept c\n"
      "instance p1 c\ninstance p2 c\ninstance p7 c\ninstance p8 c\n");
  AnnotationMap ann = load_annotations_text(
      "/product/1\tp1\n/product/2\tp2\n/bundle/7\tp7,p8\n", ontology);

  Session session(std::vector<std::string> urls) const {
    Session s;
    s.session_id = "s0";
    s.user_key = "u";
    int64_t ts = 0;
    for (const auto& url : urls) s.page_views.push_back({url, ts += 10});
    return s;
  }
};

std::vector<std::string> instances_of(const SemanticSequence& seq) {
  std::vector<std::string> out;
  for (const auto& object : seq.objects) out.push_back(object.instance);
  return out;
}

}  // namespace

TEST_CASE("map_session expands annotations in visit order") {
  Fixture f;
  const auto seq = map_session(f.session({"/product/1", "/product/2"}), f.ann);
  REQUIRE(seq);
  CHECK(instances_of(*seq) == std::vector<std::string>{"p1", "p2"});
  CHECK(seq->objects[0].page == "/product/1");
  CHECK(seq->objects[1].page == "/product/2");
  CHECK(seq->session_id == "s0");
}

TEST_CASE("map_session drops unannotated urls") {
  Fixture f;
  const auto seq = map_session(f.session({"/about", "/product/1"}), f.ann);
  REQUIRE(seq);
  CHECK(instances_of(*seq) == std::vector<std::string>{"p1"});

  CHECK_FALSE(map_session(f.session({"/about", "/contact"}), f.ann));
}

TEST_CASE("map_session collapses consecutive duplicates") {
  Fixture f;
  const auto seq = map_session(f.session({"/product/1", "/product/1"}), f.ann);
  REQUIRE(seq);
  CHECK(instances_of(*seq) == std::vector<std::string>{"p1"});

  MapOptions keep;
  keep.collapse_consecutive_duplicates = false;
  const auto raw =
      map_session(f.session({"/product/1", "/product/1"}), f.ann, keep);
  REQUIRE(raw);
  CHECK(instances_of(*raw) == std::vector<std::string>{"p1", "p1"});

  // non-consecutive repeats always survive
  const auto loop = map_session(
      f.session({"/product/1", "/product/2", "/product/1"}), f.ann);
  REQUIRE(loop);
  CHECK(instances_of(*loop) == std::vector<std::string>{"p1", "p2", "p1"});
}

TEST_CASE("multi-instance pages expand in annotation order") {
  Fixture f;
  const auto seq = map_session(f.session({"/bundle/7"}), f.ann);
  REQUIRE(seq);
  CHECK(instances_of(*seq) == std::vector<std::string>{"p7", "p8"});
  CHECK(seq->objects[0].page == "/bundle/7");
  CHECK(seq->objects[1].page == "/bundle/7");
}

TEST_CASE("build_sequence_database filters by minimum length") {
  Fixture f;
  const std::vector<Session> sessions{
      f.session({"/product/1", "/product/2"}),
      f.session({"/about"}),  // maps empty
      f.session({"/product/2", "/product/1"}),
  };
  const auto db = build_sequence_database(sessions, f.ann, 1);
  CHECK(db.size() == 2);

  const auto db2 = build_sequence_database(
      {f.session({"/product/1", "/product/2"}), f.session({"/product/1"})},
      f.ann, 2);
  CHECK(db2.size() == 1);

  const auto empty = build_sequence_database({}, f.ann, 1);
  CHECK(empty.empty());

  // universe equals the union over sequences
  CHECK(db.instance_universe() == std::set<std::string>{"p1", "p2"});

  // never more sequences than sessions, never longer than the visit count
  // times the widest annotation
  CHECK(db.size() <= sessions.size());
  for (size_t i = 0; i < db.size(); ++i) {
    size_t annotated_views = 0;
    for (const auto& session : sessions) {
      if (session.session_id == db.sequences()[i].session_id) {
        for (const auto& view : session.page_views) {
          const auto* instances = f.ann.find(view.url);
          annotated_views += instances ? instances->size() : 0;
        }
      }
    }
    CHECK(db.sequences()[i].objects.size() <= annotated_views);
  }
}

TEST_CASE("database objects stay annotation-consistent") {
  Fixture f;
  const auto db = build_sequence_database(
      {f.session({"/bundle/7", "/product/1", "/ignored"})}, f.ann, 1);
  for (const auto& sequence : db.sequences()) {
    for (const auto& object : sequence.objects) {
      const auto* instances = f.ann.find(object.page);
      REQUIRE(instances);
      CHECK(std::count(instances->begin(), instances->end(), object.instance) == 1);
    }
  }
}

TEST_CASE("map_url_history mirrors map_session") {
  Fixture f;
  CHECK(map_url_history({"/about", "/product/1", "/product/1", "/bundle/7"},
                        f.ann) ==
        std::vector<std::string>{"p1", "p7", "p8"});
  CHECK(map_url_history({"/about"}, f.ann).empty());
}

TEST_CASE("sequence database file round-trips instances") {
  Fixture f;
  const auto db = build_sequence_database(
      {f.session({"/product/1", "/product/2"}), f.session({"/bundle/7", "/product/1"})},
      f.ann, 2);
  std::ostringstream out;
  write_sequence_database(out, db);

  std::istringstream in(out.str());
  const auto loaded = read_sequence_database(in);
  REQUIRE(loaded.size() == db.size());
  CHECK(loaded.instance_universe() == db.instance_universe());
  for (size_t i = 0; i < db.size(); ++i) {
    CHECK(loaded.sequences()[i].session_id == db.sequences()[i].session_id);
    REQUIRE(loaded.sequences()[i].objects.size() ==
            db.sequences()[i].objects.size());
    for (size_t j = 0; j < db.sequences()[i].objects.size(); ++j) {
      CHECK(loaded.sequences()[i].objects[j].instance ==
            db.sequences()[i].objects[j].instance);
      CHECK(loaded.sequences()[i].objects[j].page.empty());
    }
  }
}
