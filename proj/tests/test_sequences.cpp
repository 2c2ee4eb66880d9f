#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "categories.hpp"
#include "rw/error.hpp"
#include "rw/sequences.hpp"
#include "sequence_helpers.hpp"

using namespace rw;

using namespace seqtest;

TEST_CASE("bonds compose and sequences validate") {
  const auto c = testcat::lo(5);
  const auto s = chain(c, {0, 1, 2, 4}, true);
  validate_sequence(c, s);
  CHECK(s.bond(c, 1, 1) == c.identity(1));
  CHECK(c.morphism_map(s.bond(c, 0, 3)) == bond_map(c, s, 0, 3));
  CHECK_THROWS_AS(s.bond(c, 2, 1), Error);
  auto broken = s;
  broken.bonding.pop_back();
  CHECK_THROWS_AS(validate_sequence(c, broken), Error);
  broken = s;
  std::swap(broken.bonding[0], broken.bonding[1]);
  CHECK_THROWS_AS(validate_sequence(c, broken), Error);
}

TEST_CASE("transformation validation") {
  const auto c = testcat::lo(4);
  const auto x = chain(c, {0, 1});
  const auto y = chain(c, {1, 2, 3});
  Transformation t{{0, 2}, {*c.find_by_map(0, 1, ElementMap{0}), *c.find_by_map(1, 3, ElementMap{0, 1})}};
  CHECK_NOTHROW(validate_transformation(c, x, y, t));
  auto bad = t;
  bad.phi[1] = 1;  // does not reach the last level
  bad.components[1] = *c.find_by_map(1, 2, ElementMap{0, 1});
  CHECK_THROWS_AS(validate_transformation(c, x, y, bad), Error);
  bad = t;
  bad.components[0] = *c.find_by_map(0, 1, ElementMap{1});  // breaks naturality
  CHECK_THROWS_AS(validate_transformation(c, x, y, bad), Error);
  bad = t;
  bad.phi = {2, 1};
  CHECK_THROWS_AS(validate_transformation(c, x, y, bad), Error);
  CHECK_NOTHROW(validate_transformation(c, y, y, identity_transformation(c, y)));
}

TEST_CASE("equivalence is a congruence on short chains") {
  const auto c = testcat::lo(5);
  const auto x = chain(c, {0, 1});
  const auto y = chain(c, {1, 2, 3}, true);
  const auto z = chain(c, {2, 4}, true);
  const auto txy = all_transformations(c, x, y);
  const auto tyz = all_transformations(c, y, z);
  REQUIRE(txy.size() >= 10);
  REQUIRE(tyz.size() > 3);

  auto eq = [&](const TruncatedSequence& tgt, const Transformation& a, const Transformation& b) {
    const auto v = equiv_check(c, a.phi.size() == x.objects.size() ? x : y, tgt, a, b, tgt.length() - 1);
    CHECK(v.status != Status::Unknown);
    return v.status == Status::Holds;
  };

  int classes_checked = 0;
  for (const auto& a : txy) {
    CHECK(eq(y, a, a));
    for (const auto& b : txy) {
      const bool ab = eq(y, a, b);
      CHECK(ab == oracle_equiv(c, y, a, b));
      CHECK(ab == eq(y, b, a));
      if (!ab) continue;
      ++classes_checked;
      for (const auto& d : txy)
        if (eq(y, b, d)) CHECK(eq(y, a, d));
      for (const auto& s : tyz) CHECK(eq(z, compose(c, x, y, z, s, a), compose(c, x, y, z, s, b)));
    }
  }
  for (const auto& s1 : tyz)
    for (const auto& s2 : tyz) {
      if (!eq(z, s1, s2)) continue;
      for (const auto& a : txy) CHECK(eq(z, compose(c, x, y, z, s1, a), compose(c, x, y, z, s2, a)));
    }
  CHECK(classes_checked > static_cast<int>(txy.size()));
}

TEST_CASE("equivalence verdicts at small bounds") {
  const auto c = testcat::lo(4);
  const auto x = chain(c, {0});
  const auto y = chain(c, {0, 1, 2});
  const MorphismId low = *c.find_by_map(0, 2, ElementMap{0});
  const MorphismId high = *c.find_by_map(0, 2, ElementMap{2});
  const Transformation a{{2}, {low}}, b{{2}, {high}};
  CHECK(equiv_check(c, x, y, a, b, 2).status == Status::Fails);
  const auto v = equiv_check(c, x, y, a, b, 1);
  CHECK(v.status == Status::Unknown);
  CHECK(v.offending == 0);
  // Same point entered at different levels agrees only once both are present.
  const Transformation early{{2}, {low}};
  const auto x2 = chain(c, {0, 0});
  const Transformation p{{0, 2}, {c.identity(0), low}};
  const Transformation q{{1, 2}, {*c.find_by_map(0, 1, ElementMap{0}), low}};
  const auto w = equiv_check(c, x2, y, p, q, 2);
  CHECK(w.status == Status::Holds);
  CHECK(w.witness_level == std::vector<int>{1, 2});
  CHECK(equiv_check(c, x2, y, p, q, 0).status == Status::Unknown);
  CHECK(equiv_check(c, x, y, early, a, 0).status == Status::Unknown);
  CHECK_THROWS_AS(equiv_check(c, x, y, a, p, 2), Error);
}

TEST_CASE("composition bookkeeping") {
  const auto c = testcat::lo(5);
  const auto x = chain(c, {0, 1});
  const auto y = chain(c, {1, 2, 3});
  const auto z = chain(c, {3, 4});
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto t1 = random_transformation(c, x, y, rng);
    const auto t2 = random_transformation(c, y, z, rng);
    const auto t = compose(c, x, y, z, t2, t1);
    for (int n = 0; n < x.length(); ++n) {
      CHECK(t.phi[n] == t2.phi[t1.phi[n]]);
      CHECK(c.morphism_map(t.components[n]) ==
            compose_maps(c.morphism_map(t2.components[t1.phi[n]]), c.morphism_map(t1.components[n])));
    }
    CHECK(compose(c, x, y, y, identity_transformation(c, y), t1) == t1);
    CHECK(compose(c, x, x, y, t1, identity_transformation(c, x)) == t1);
  }
  // t2 defined only on a truncation of Y that t1 overshoots.
  const auto y_short = chain(c, {1, 2});
  const auto t1 = random_transformation(c, x, y, rng);
  const Transformation t2{{1, 1}, {*c.find_by_map(1, 3, ElementMap{0, 1}), *c.find_by_map(2, 3, ElementMap{0, 1, 2})}};
  REQUIRE_NOTHROW(validate_transformation(c, y_short, chain(c, {2, 3}), t2));
  CHECK_THROWS_WITH_AS(compose(c, x, y, chain(c, {2, 3}), t2, t1), doctest::Contains("beyond"), Error);
  Transformation wrong = t1;
  wrong.phi.push_back(2);
  CHECK_THROWS_AS(compose(c, x, y, z, random_transformation(c, y, z, rng), wrong), Error);
}

TEST_CASE("J is full and faithful on constant sequences") {
  const auto c = testcat::lo(4);
  for (int len = 1; len <= 3; ++len)
    for (ObjectId a = 0; a < 3; ++a)
      for (ObjectId b = a; b < 4; ++b) {
        const auto ja = embed_J(c, a, len);
        const auto jb = embed_J(c, b, len);
        validate_sequence(c, ja);
        for (const auto& t : all_transformations(c, ja, jb)) {
          int preimages = 0;
          for (MorphismId f : c.hom(a, b))
            if (equiv_check(c, ja, jb, lift_J(c, f, len), t, len - 1).status == Status::Holds) ++preimages;
          CHECK(preimages == 1);
        }
        for (MorphismId f : c.hom(a, b)) {
          validate_transformation(c, ja, jb, lift_J(c, f, len));
          for (MorphismId g : c.hom(a, b)) {
            const auto v = equiv_check(c, ja, jb, lift_J(c, f, len), lift_J(c, g, len), len - 1);
            CHECK((v.status == Status::Holds) == (f == g));
          }
        }
      }
}

TEST_CASE("mono test on random LO transformations") {
  const auto c = testcat::lo(6);
  std::mt19937 rng(2024);
  int instances = 0, separated = 0;
  for (int iter = 0; iter < 1200; ++iter) {
    const int top_y = std::uniform_int_distribution<int>(0, 5)(rng);
    const auto x = random_chain(c, rng, std::uniform_int_distribution<int>(1, 3)(rng),
                                std::uniform_int_distribution<int>(0, top_y)(rng));
    const auto y = random_chain(c, rng, std::uniform_int_distribution<int>(1, 3)(rng), top_y);
    const auto z = random_chain(c, rng, std::uniform_int_distribution<int>(1, 3)(rng), 5);
    const auto f = random_transformation(c, y, z, rng);
    const auto g = random_transformation(c, x, y, rng);
    const auto h = iter % 3 == 0 ? g : random_transformation(c, x, y, rng);
    const int bound = std::max(y.length(), z.length()) - 1;
    CHECK(mono_test(c, x, y, z, f, g, h, bound) == Status::Holds);
    ++instances;
    if (!oracle_equiv(c, y, g, h)) {
      ++separated;
      CHECK(equiv_check(c, x, z, compose(c, x, y, z, f, g), compose(c, x, y, z, f, h), bound).status ==
            Status::Fails);
    }
  }
  CHECK(instances >= 1000);
  CHECK(separated > 100);
}

TEST_CASE("mono test detects a non-mono component") {
  // u, v: A -> B merged by p: B -> C.
  CategoryTables t;
  t.objects = {"A", "B", "C"};
  t.homs = {{"A", "A", {"1A"}}, {"B", "B", {"1B"}}, {"C", "C", {"1C"}},
            {"A", "B", {"u", "v"}}, {"B", "C", {"p"}}, {"A", "C", {"pu"}}};
  t.identities = {{"A", "1A"}, {"B", "1B"}, {"C", "1C"}};
  t.compose = {{"p", "u", "pu"}, {"p", "v", "pu"}};
  const auto c = FiniteCategory::from_tables(t);
  const ObjectId a = 0, b = 1, cc = 2;
  const auto x = embed_J(c, a, 1), y = embed_J(c, b, 1), z = embed_J(c, cc, 1);
  const auto f = lift_J(c, *c.find_morphism("p"), 1);
  const auto g = lift_J(c, *c.find_morphism("u"), 1);
  const auto h = lift_J(c, *c.find_morphism("v"), 1);
  CHECK(mono_test(c, x, y, z, f, g, h, 0) == Status::Fails);
  CHECK(mono_test(c, x, y, z, f, g, g, 0) == Status::Holds);
}

TEST_CASE("colimit of the initial-segment chain") {
  const auto c = testcat::lo(7);
  const auto s = chain(c, {0, 1, 2, 3, 4});
  const auto colim = colimit(c, s);
  CHECK(colim.structure == linear_order(5));
  CHECK(colim.names == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
  for (int n = 0; n < 5; ++n) {
    CHECK(is_embedding(c.structure(s.objects[n]), colim.structure, colim.cocone[n]));
    for (int m = n; m < 5; ++m)
      CHECK(compose_maps(colim.cocone[m], bond_map(c, s, n, m)) == colim.cocone[n]);
  }

  // Cocone into LO7 through the shift by one.
  std::vector<ElementMap> d;
  for (int n = 0; n < 5; ++n) {
    ElementMap m = identity_map(n + 1);
    for (int& v : m) v += 1;
    d.push_back(m);
  }
  const auto med = mediating_map(c, s, colim, linear_order(7), d);
  REQUIRE(med);
  CHECK(*med == ElementMap{1, 2, 3, 4, 5});
  // Uniqueness: no other embedding commutes with the cocone.
  int commuting = 0;
  for (const auto& e : enumerate_embeddings(colim.structure, linear_order(7))) {
    bool ok = true;
    for (int n = 0; n < 5; ++n) ok &= compose_maps(e, colim.cocone[n]) == d[n];
    commuting += ok;
  }
  CHECK(commuting == 1);
  d[2] = ElementMap{0, 1, 2};
  CHECK_FALSE(mediating_map(c, s, colim, linear_order(7), d));
  d.pop_back();
  CHECK_FALSE(mediating_map(c, s, colim, linear_order(7), d));
}

TEST_CASE("colimit names track where points enter") {
  const auto c = testcat::lo(5);
  const auto s = chain(c, {0, 2, 4}, true);  // new points appear below the old ones
  const auto colim = colimit(c, s);
  CHECK(canonical_form(colim.structure).structure == canonical_form(linear_order(5)).structure);
  CHECK(colim.names == std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}});
  // Names sort by (level, element); as a set they cover each point once.
  for (int n = 0; n < 3; ++n)
    for (int i = 0; i < c.structure(s.objects[n]).size(); ++i) {
      const auto& name = colim.names[colim.cocone[n][i]];
      CHECK(name.first <= n);
      CHECK(colim.cocone[name.first][name.second] == colim.cocone[n][i]);
    }
  const auto g = testcat::graphs(3);
  const auto p3 = testcat::find_structure(g, path_graph(3));
  CHECK(colimit(g, embed_J(g, p3, 3)).structure.size() == 3);
  CHECK_THROWS_AS(colimit(c.op(), chain(c, {0})), Error);
}

TEST_CASE("weak Fraisse check on the LO chain") {
  const auto c = testcat::lo(8);
  const auto w = chain(c, {0, 1, 2, 3, 4, 5, 6, 7});
  const std::vector<ObjectId> small{0, 1, 2, 3};
  const auto r = weak_fraisse_check(c, w, small, 7, 7);
  CHECK(r.status == Status::Holds);
  CHECK(r.cofinal == Status::Holds);
  for (const auto& [obj, level] : r.entry_level) CHECK(level == obj);
  REQUIRE(r.levels.size() == 8);
  for (const auto& lvl : r.levels) {
    REQUIRE(lvl.m);
    // A copy of W_m inside LO4 leaves no room below only once m >= 3.
    CHECK(*lvl.m == std::max(lvl.n, 3));
    for (const auto& wit : lvl.witnesses)
      CHECK(c.compose(wit.g, c.compose(wit.f, w.bond(c, lvl.n, *lvl.m))) == w.bond(c, lvl.n, wit.k));
  }

  // Exhaustive cross-check of the least m for n = 1.
  for (int m = 1; m < 3; ++m) {
    bool every = true;
    for (ObjectId cc : small)
      for (MorphismId f : c.hom(m, cc)) {
        bool some = false;
        for (int k = m; k < 8; ++k)
          for (MorphismId g : c.hom(cc, k)) some |= c.compose(g, c.compose(f, w.bond(c, 1, m))) == w.bond(c, 1, k);
        every &= some;
      }
    CHECK_FALSE(every);
  }

  CHECK(weak_fraisse_check(c, w, small, 2, 7).status == Status::Unknown);
  const auto short_w = chain(c, {0, 1, 2});
  const auto miss = weak_fraisse_check(c, short_w, small, 2, 2);
  CHECK(miss.status == Status::Fails);
  CHECK(miss.cofinal == Status::Fails);
  CHECK_FALSE(miss.entry_level.back().second);
  CHECK(weak_fraisse_check(c, w, {}, 7, 7).status == Status::Holds);
}

namespace {

// Structure-level (W1)/(W2) with B ranging over the catalog.
bool oracle_weakly_homogeneous(const Structure& s, const std::vector<Structure>& catalog) {
  const auto aut = automorphisms(s);
  for (const auto& a : catalog)
    for (const auto& f : enumerate_embeddings(a, s)) {
      bool found = false;
      for (const auto& b : catalog)
        for (const auto& e : enumerate_embeddings(a, b))
          for (const auto& i : enumerate_embeddings(b, s)) {
            if (found || compose_maps(i, e) != f) continue;
            bool all = true;
            for (const auto& j : enumerate_embeddings(b, s)) {
              bool some = false;
              for (const auto& h : aut) some |= compose_maps(h, compose_maps(j, e)) == f;
              all &= some;
            }
            found |= all;
          }
      if (!found) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("weak homogeneity against the automorphism oracle") {
  const auto g = testcat::graphs(4);
  std::vector<ObjectId> small;
  std::vector<Structure> small_structs;
  for (ObjectId x = 0; x < g.object_count(); ++x)
    if (g.structure(x).size() <= 2) {
      small.push_back(x);
      small_structs.push_back(g.structure(x));
    }
  int holds = 0, ultra = 0;
  for (ObjectId s = 0; s < g.object_count(); ++s) {
    const auto r = weak_homogeneity_check(g, s, small);
    CHECK((r.status == Status::Holds) == oracle_weakly_homogeneous(g.structure(s), small_structs));
    for (const auto& w : r.witnesses) {
      CHECK(g.compose(w.i, w.e) == w.f);
      CHECK(w.j_to_h.size() == g.hom(w.b, s).size());
      for (const auto& [j, h] : w.j_to_h) CHECK(g.compose(h, g.compose(j, w.e)) == g.compose(w.i, w.e));
    }
    holds += r.status == Status::Holds;
    const auto u = ultrahomogeneity_check(g, s, small);
    if (u.status == Status::Holds) {
      ++ultra;
      CHECK(r.status == Status::Holds);
      for (const auto& [e1, e2, h] : u.witnesses) CHECK(g.compose(h, e1) == e2);
    } else {
      REQUIRE(u.failure);
    }
  }
  CHECK(ultra > 3);
  CHECK(holds >= ultra);
  CHECK(weak_homogeneity_check(g, 0, {}).status == Status::Holds);
}

TEST_CASE("P3 over an edge and a point") {
  const auto c = FiniteCategory::from_structures({"K1", "K2", "P3"}, {complete_graph(1), complete_graph(2), path_graph(3)});
  const std::vector<ObjectId> small{0, 1};
  const auto r = weak_homogeneity_check(c, 2, small);
  CHECK(r.status == Status::Fails);
  REQUIRE(r.failure);
  CHECK(r.failure->first == 0);
  CHECK(r.status == (oracle_weakly_homogeneous(path_graph(3), {complete_graph(1), complete_graph(2)})
                         ? Status::Holds
                         : Status::Fails));
  CHECK(ultrahomogeneity_check(c, 2, small).status == Status::Fails);
}

TEST_CASE("finite linear orders are rigid") {
  const auto c = testcat::lo(6);
  const std::vector<ObjectId> small{0, 1, 2};
  const auto r = weak_homogeneity_check(c, 5, small);
  // Aut(LO6) is trivial and six points of LO6 are six different copies of LO1.
  CHECK(r.status == Status::Fails);
  CHECK(r.failure == std::pair<ObjectId, MorphismId>{0, c.hom(0, 5).front()});
  CHECK(ultrahomogeneity_check(c, 5, small).status == Status::Fails);
  CHECK(weak_homogeneity_check(c, 0, std::vector<ObjectId>{0}).status == Status::Holds);
}
