#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ontorec/errors.hpp"
#include "ontorec/eval.hpp"
#include "testutil.hpp"

using namespace ontorec;
using namespace ontorec::testutil;

namespace {

// two categories of three products each; walks inside a category dominate
struct SweepFixture {
  Ontology ontology = load_ontology_text(
      "concept root\nconcept cat_a\nconcept cat_b\n"
      "concept pa1\nconcept pa2\nconcept pa3\n"
      "concept pb1\nconcept pb2\nconcept pb3\n"
      "isa cat_a root\nisa cat_b root\n"
      "isa pa1 cat_a\nisa pa2 cat_a\nisa pa3 cat_a\n"
      "isa pb1 cat_b\nisa pb2 cat_b\nisa pb3 cat_b\n"
      "instance a1 pa1\ninstance a2 pa2\ninstance a3 pa3\n"
      "instance b1 pb1\ninstance b2 pb2\ninstance b3 pb3\n");
  AnnotationMap ann = load_annotations_text(
      "/a1\ta1\n/a2\ta2\n/a3\ta3\n/b1\tb1\n/b2\tb2\n/b3\tb3\n", ontology);
  SemanticDistanceMatrix matrix = SemanticDistanceMatrix::build(ontology);

  SequenceDatabase db() const {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 12; ++i) {
      rows.push_back({"a1", "a2", "a3"});
      rows.push_back({"a2", "a3", "a1"});
      rows.push_back({"b1", "b2", "b3", "b1"});
      rows.push_back({"b3", "b2", "b1"});
    }
    rows.push_back({"a1", "a2"});  // too short to split at window 2
    rows.push_back({"b1", "b2"});
    rows.push_back({"a1", "b1", "a2"});
    return make_db(rows);
  }

  SweepConfig config() const {
    SweepConfig cfg;
    cfg.miner.min_sup = 0.05;
    cfg.window = 2;
    cfg.folds = 7;
    cfg.thresholds = {0.1, 0.25, 0.5, 0.75, 1.0};
    cfg.seed = 11;
    return cfg;
  }
};

}  // namespace

TEST_CASE("kfold_split partitions deterministically") {
  const auto tens = kfold_split(10, 10, 1);
  REQUIRE(tens.size() == 10);
  for (const auto& fold : tens) {
    CHECK(fold.test.size() == 1);
    CHECK(fold.train.size() == 9);
  }

  const auto elevens = kfold_split(11, 10, 1);
  size_t twos = 0;
  for (const auto& fold : elevens) {
    CHECK(fold.test.size() >= 1);
    if (fold.test.size() == 2) ++twos;
    CHECK(fold.test.size() + fold.train.size() == 11);
  }
  CHECK(twos == 1);

  // every index appears in exactly one test fold
  std::vector<size_t> seen(11, 0);
  for (const auto& fold : elevens) {
    for (const size_t idx : fold.test) ++seen[idx];
  }
  for (const size_t count : seen) CHECK(count == 1);

  // determinism and seed sensitivity
  const auto again = kfold_split(11, 10, 1);
  for (size_t f = 0; f < 10; ++f) CHECK(again[f].test == elevens[f].test);
  const auto other = kfold_split(11, 10, 2);
  bool identical = true;
  for (size_t f = 0; f < 10; ++f) {
    identical = identical && other[f].test == elevens[f].test;
  }
  CHECK_FALSE(identical);

  CHECK_THROWS_AS(kfold_split(5, 10, 1), Error);
}

TEST_CASE("precision and coverage match the set ratios") {
  const std::set<std::string> rec{"p1", "p2", "p3"};
  const std::set<std::string> eval_part{"p2", "p3", "p4"};
  CHECK(precision(rec, eval_part) == doctest::Approx(2.0 / 3.0));
  CHECK(coverage(rec, eval_part) == doctest::Approx(2.0 / 3.0));

  CHECK(precision({"p2", "p3"}, eval_part) == doctest::Approx(1.0));
  CHECK(coverage({"p1", "p2", "p3", "p4"}, eval_part) == doctest::Approx(1.0));

  CHECK(precision({"x"}, eval_part) == doctest::Approx(0.0));
  CHECK(coverage({"x"}, eval_part) == doctest::Approx(0.0));
  CHECK(coverage({}, eval_part) == doctest::Approx(0.0));
}

TEST_CASE("split_transaction cuts at the window") {
  SemanticSequence t;
  t.session_id = "s";
  for (const char* inst : {"a", "b", "c", "d"}) t.objects.push_back({"/x", inst});

  const auto split = split_transaction(t, 2);
  CHECK(split.window.size() == 2);
  CHECK(split.eval_part.size() == 2);

  std::vector<SemanticObject> glued = split.window;
  glued.insert(glued.end(), split.eval_part.begin(), split.eval_part.end());
  CHECK(glued == t.objects);

  const auto shorter = split_transaction(t, 9);
  CHECK(shorter.window.size() == 4);
  CHECK(shorter.eval_part.empty());
}

TEST_CASE("run_sweep produces one row per threshold with sane values") {
  SweepFixture f;
  const auto report = run_sweep(f.db(), f.matrix, f.ann, f.config());
  REQUIRE(report.rows.size() == 5);
  CHECK(report.folds == 7);
  for (const auto& row : report.rows) {
    CHECK(row.mean_precision >= 0.0);
    CHECK(row.mean_precision <= 1.0);
    CHECK(row.mean_coverage >= 0.0);
    CHECK(row.mean_coverage <= 1.0);
    CHECK(row.scored > 0);
  }
  // transactions of length <= window are skipped
  CHECK(report.rows[0].skipped > 0);
  // the strongly clustered walks make low-threshold hits likely
  CHECK(report.rows[0].mean_coverage > 0.0);
}

TEST_CASE("mean coverage never increases across the sweep") {
  SweepFixture f;
  const auto report = run_sweep(f.db(), f.matrix, f.ann, f.config());
  for (size_t i = 1; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].mean_coverage <= report.rows[i - 1].mean_coverage);
  }
}

TEST_CASE("run_sweep is deterministic") {
  SweepFixture f;
  const auto once = run_sweep(f.db(), f.matrix, f.ann, f.config());
  const auto twice = run_sweep(f.db(), f.matrix, f.ann, f.config());
  CHECK(once == twice);

  std::ostringstream a, b;
  write_report(a, once);
  write_report(b, twice);
  CHECK(a.str() == b.str());
}

TEST_CASE("an everywhere-empty rule base is not scorable") {
  SweepFixture f;
  auto cfg = f.config();
  cfg.miner.min_sup = 1.0;  // nothing is frequent in every fold
  try {
    run_sweep(f.db(), f.matrix, f.ann, cfg);
    FAIL("expected NoScorableTransactions");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoScorableTransactions);
  }
}

TEST_CASE("transactions shorter than the window cannot be scored") {
  SweepFixture f;
  auto cfg = f.config();
  cfg.window = 10;  // longer than every transaction
  try {
    run_sweep(f.db(), f.matrix, f.ann, cfg);
    FAIL("expected NoScorableTransactions");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoScorableTransactions);
  }
}

TEST_CASE("report table is plottable text") {
  SweepFixture f;
  const auto report = run_sweep(f.db(), f.matrix, f.ann, f.config());
  std::ostringstream out;
  write_report(out, report);
  std::istringstream in(out.str());
  std::string line;
  size_t rows = 0;
  REQUIRE(std::getline(in, line));
  CHECK(line == "#threshold\tprecision\tcoverage\tn_scored\tn_skipped");
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), '\t') == 4);
    ++rows;
  }
  CHECK(rows == report.rows.size());
}
