#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "rw/category.hpp"
#include "rw/error.hpp"

using namespace rw;

namespace {

FiniteCategory lo_catalog(int max, Execution exec = Execution::Parallel) {
  std::vector<std::string> names;
  std::vector<Structure> cat;
  for (int n = 1; n <= max; ++n) {
    names.push_back("LO" + std::to_string(n));
    cat.push_back(linear_order(n));
  }
  return FiniteCategory::from_structures(names, cat, exec);
}

// Checks every composable triple directly on the tables.
bool associative(const FiniteCategory& c) {
  for (ObjectId a = 0; a < c.object_count(); ++a)
    for (ObjectId b = 0; b < c.object_count(); ++b)
      for (ObjectId x = 0; x < c.object_count(); ++x)
        for (ObjectId d = 0; d < c.object_count(); ++d)
          for (MorphismId f : c.hom(a, b))
            for (MorphismId g : c.hom(b, x))
              for (MorphismId h : c.hom(x, d))
                if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f)) return false;
  return true;
}

}  // namespace

TEST_CASE("hom-sets of the order catalog") {
  const auto c = lo_catalog(2);
  CHECK(c.hom(0, 1).size() == 2);
  CHECK(c.hom(1, 0).empty());
  CHECK(c.hom(0, 0).size() == 1);
  const auto p = FiniteCategory::from_structures({"P3"}, {path_graph(3)});
  CHECK(p.hom(0, 0).size() == 2);
}

TEST_CASE("hom-sets agree with the brute-force embedding oracle") {
  const auto g = all_graphs(3);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g.size(); ++i) names.push_back("G" + std::to_string(i));
  const auto c = FiniteCategory::from_structures(names, g);
  for (ObjectId a = 0; a < c.object_count(); ++a)
    for (ObjectId b = 0; b < c.object_count(); ++b) {
      const auto want = oracle::embeddings(g[a], g[b]);
      REQUIRE(c.hom(a, b).size() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) CHECK(c.morphism_map(c.hom(a, b)[i]) == want[i]);
    }
}

TEST_CASE("serial and parallel construction build the same tables") {
  CHECK(lo_catalog(5, Execution::Serial).same_tables(lo_catalog(5, Execution::Parallel)));
}

TEST_CASE("identity and associativity") {
  const auto c = lo_catalog(4);
  CHECK(associative(c));
  for (int m = 0; m < c.morphism_count(); ++m) {
    CHECK(c.compose(c.identity(c.target(m)), m) == m);
    CHECK(c.compose(m, c.identity(c.source(m))) == m);
  }
  const auto r = check_axioms(c);
  CHECK(r.identity_laws);
  CHECK(r.associativity);
  CHECK(r.all_mono);
  CHECK(r.directed);
  CHECK(r.local_finiteness == Status::Holds);
  CHECK(r.below[3] == std::vector<ObjectId>{0, 1, 2, 3});
}

TEST_CASE("directedness fails for an edge and a non-edge") {
  const auto c = FiniteCategory::from_structures({"K2", "E2"}, {complete_graph(2), empty_graph(2)});
  const auto r = check_axioms(c);
  CHECK(r.all_mono);
  CHECK_FALSE(r.directed);
  REQUIRE(r.directed_failure);
}

TEST_CASE("mixed signatures are rejected") {
  CHECK_THROWS_AS(FiniteCategory::from_structures({"a", "b"}, {linear_order(2), path_graph(2)}), Error);
}

TEST_CASE("opposite category") {
  const auto c = lo_catalog(4);
  const auto o = c.op();
  CHECK(o.op().same_tables(c));
  for (ObjectId a = 0; a < c.object_count(); ++a)
    for (ObjectId b = 0; b < c.object_count(); ++b) {
      const auto h = c.hom(a, b);
      const auto ho = o.hom(b, a);
      CHECK(std::equal(h.begin(), h.end(), ho.begin(), ho.end()));
    }
  const auto rc = check_axioms(c);
  const auto ro = check_axioms(o, {.check_local_finiteness = false});
  CHECK(rc.all_mono == ro.all_epi);
  CHECK(rc.all_epi == ro.all_mono);
  CHECK(rc.directed == ro.dually_directed);
  CHECK(rc.dually_directed == ro.directed);
  // Embeddings between orders of different sizes are not epi.
  CHECK_FALSE(rc.all_epi);
  CHECK_FALSE(ro.all_mono);
  const MorphismId f = c.hom(0, 1)[0];
  CHECK(c.morphism_name(f) + "^op" == o.morphism_name(f));
  CHECK(o.find_morphism(o.morphism_name(f)) == f);
}

TEST_CASE("skeleton of isomorphic copies") {
  const Structure lo2 = linear_order(2);
  const Structure rev = lo2.relabeled(std::vector<int>{1, 0});
  const auto c = FiniteCategory::from_structures({"A", "B", "C"}, {lo2, rev, linear_order(3)});
  const auto s = skeletonize(c);
  CHECK(s.representatives.size() == 2);
  CHECK(s.class_of[0] == s.class_of[1]);
  for (ObjectId x = 0; x < c.object_count(); ++x) {
    const MorphismId eta = s.canon_iso[x];
    CHECK(c.source(eta) == x);
    CHECK(c.target(eta) == s.representative_of(x));
    const auto inv = c.inverse(eta);
    REQUIRE(inv);
    CHECK(c.compose(*inv, eta) == c.identity(x));
  }
  // Hom-sets between parents are in bijection with those between representatives.
  for (ObjectId x = 0; x < 3; ++x)
    for (ObjectId y = 0; y < 3; ++y)
      CHECK(c.hom(x, y).size() == c.hom(s.representative_of(x), s.representative_of(y)).size());
}

TEST_CASE("skeleton of a skeletal catalog is the identity") {
  const auto c = lo_catalog(3);
  const auto s = skeletonize(c);
  CHECK(s.representatives.size() == 3);
  for (ObjectId x = 0; x < 3; ++x) CHECK(s.canon_iso[x] == c.identity(x));
  const auto empty = FiniteCategory::from_structures({}, {});
  CHECK(skeletonize(empty).representatives.empty());
}

TEST_CASE("table-backed categories") {
  CategoryTables t;
  t.objects = {"A", "B"};
  t.homs = {{"A", "A", {"1A"}}, {"B", "B", {"1B"}}, {"A", "B", {"f", "g"}}};
  t.identities = {{"A", "1A"}, {"B", "1B"}};
  const auto c = FiniteCategory::from_tables(t);
  CHECK(c.hom(0, 1).size() == 2);
  const auto f = *c.find_morphism("f");
  CHECK(c.compose(c.identity(1), f) == f);
  const auto r = check_axioms(c);
  CHECK(r.identity_laws);
  CHECK(r.associativity);
  CHECK(r.all_mono);
  CHECK(r.directed);
  CHECK(skeletonize(c).representatives.size() == 2);
  CHECK(c.op().op().same_tables(c));

  CategoryTables bad = t;
  bad.homs.push_back({"B", "A", {"k"}});
  CHECK_THROWS_AS(FiniteCategory::from_tables(bad), Error);  // f . k has no composite
}
