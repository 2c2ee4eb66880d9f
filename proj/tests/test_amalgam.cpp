#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "categories.hpp"
#include "rw/amalgam.hpp"
#include "rw/error.hpp"

using namespace rw;

namespace {

// A with two arrows g: A -> B and h: A -> C and nothing joining B and C.
FiniteCategory vee() {
  CategoryTables t;
  t.objects = {"A", "B", "C"};
  t.homs = {{"A", "A", {"1A"}}, {"B", "B", {"1B"}}, {"C", "C", {"1C"}}, {"A", "B", {"g"}}, {"A", "C", {"h"}}};
  t.identities = {{"A", "1A"}, {"B", "1B"}, {"C", "1C"}};
  return FiniteCategory::from_tables(t);
}

// Exhaustive: is there any D, r, s at all?
bool brute_amalgamable(const FiniteCategory& c, MorphismId g, MorphismId h) {
  for (ObjectId d = 0; d < c.object_count(); ++d)
    for (MorphismId r : c.hom(c.target(g), d))
      for (MorphismId s : c.hom(c.target(h), d))
        if (c.compose(r, g) == c.compose(s, h)) return true;
  return false;
}

}  // namespace

namespace {
const std::vector<ObjectId> up_to_five{0, 1, 2, 3, 4};
}

TEST_CASE("identity is an amalgamation arrow in linear orders") {
  // Quantify over orders of size <= 5; amalgams may need up to 9 points.
  const auto c = testcat::lo(9);
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    const auto v = is_amalgamation_arrow(c, c.identity(1), up_to_five, exec);
    CHECK(v.status == Status::Holds);
    CHECK(v.witnesses.size() == 20 * 20);
    for (const auto& w : v.witnesses)
      CHECK(verify_amalgam(c, c.compose(w.g, v.f), c.compose(w.h, v.f), w.witness));
  }
  // With no room above the quantified objects, disjoint pairs in LO5 have no amalgam.
  const auto tight = testcat::lo(5);
  const auto v = is_amalgamation_arrow(tight, tight.identity(1));
  CHECK(v.status == Status::Fails);
  REQUIRE(v.failure);
  CHECK_FALSE(brute_amalgamable(tight, tight.compose(v.failure->first, v.f), tight.compose(v.failure->second, v.f)));
  const auto single = FiniteCategory::from_structures({"LO2"}, {linear_order(2)});
  CHECK(is_amalgamation_arrow(single, single.identity(0)).status == Status::Holds);
}

TEST_CASE("an edge and a non-edge do not amalgamate over a point") {
  const auto c = FiniteCategory::from_structures({"K1", "K2", "E2"}, {complete_graph(1), complete_graph(2), empty_graph(2)});
  const auto v = is_amalgamation_arrow(c, c.identity(0));
  CHECK(v.status == Status::Fails);
  REQUIRE(v.failure);
  CHECK_FALSE(brute_amalgamable(c, v.failure->first, v.failure->second));
  // Weak amalgamation still holds: an arrow out of K1 into E2 (or K2) only meets automorphisms.
  const auto w = wap_check(c);
  CHECK(w.status == Status::Holds);
  CHECK(c.target(w.entries[0].arrow->f) != 0);
}

TEST_CASE("weak amalgamation") {
  const auto c = testcat::lo(9);
  const auto r = wap_check(c, up_to_five);
  CHECK(r.status == Status::Holds);
  for (const auto& e : r.entries) {
    REQUIRE(e.arrow);
    CHECK(e.arrow->f == c.identity(e.a));
  }
  CHECK(r.entries.size() == 5);
  // Without room every object reaches the top object, whose identity is trivially an amalgamation arrow.
  const auto tight = testcat::lo(5);
  const auto rt = wap_check(tight);
  CHECK(rt.status == Status::Holds);
  CHECK(tight.target(rt.entries[0].arrow->f) == 4);
  CHECK(wap_check(FiniteCategory::from_structures({}, {})).status == Status::Holds);
  // In the vee, id_A fails but A -> B is an amalgamation arrow.
  const auto v = vee();
  const auto rv = wap_check(v);
  CHECK(rv.status == Status::Holds);
  CHECK(rv.entries[0].arrow->f == *v.find_morphism("g"));
}

TEST_CASE("two out of k") {
  const auto c = testcat::lo(9);
  const auto r = two_of_k_check(c, 1, 2, up_to_five);
  CHECK(r.status == Status::Holds);
  // k = 2 coincides with plain amalgamation of all pairs.
  bool all_pairs = true;
  for (ObjectId b = 0; b < 5; ++b)
    for (ObjectId d = 0; d < 5; ++d)
      for (MorphismId g : c.hom(1, b))
        for (MorphismId h : c.hom(1, d)) all_pairs &= brute_amalgamable(c, g, h);
  CHECK(all_pairs);
  for (int k = 3; k <= 25; k += 11) CHECK(two_of_k_check(c, 1, k, up_to_five).status == Status::Holds);
  CHECK(r.morphisms == 20);

  const auto v = vee();
  const auto r2 = two_of_k_check(v, 0, 2);
  CHECK(r2.status == Status::Fails);
  REQUIRE(r2.refutation.size() == 2);
  CHECK_FALSE(brute_amalgamable(v, r2.refutation[0], r2.refutation[1]));
  CHECK(two_of_k_check(v, 0, 3).status == Status::Holds);
  CHECK_THROWS_AS(two_of_k_check(v, 0, 1), Error);
}

TEST_CASE("two out of k is monotone in k") {
  const auto g = testcat::graphs(3);
  for (ObjectId a = 0; a < g.object_count(); ++a) {
    bool held = false;
    for (int k = 2; k <= 6; ++k) {
      const bool holds = two_of_k_check(g, a, k).status == Status::Holds;
      if (held) CHECK(holds);
      held |= holds;
    }
  }
}

TEST_CASE("claim 1 transcript on the order instance") {
  const auto c = testcat::lo(6);
  // A = LO2, B_0 = B_1 = C = LO3, g_i = id, two distinct f_i, D = LO6.
  const std::vector<MorphismId> f{c.hom(1, 2)[0], c.hom(1, 2)[1]};
  const std::vector<MorphismId> g{c.identity(2), c.identity(2)};
  const auto t = claim1_extract(c, 1, 2, 2, 5, g, f);
  CHECK(t.color != t.avoided);
  CHECK(c.compose(t.g, f[t.color]) == c.compose(t.x, c.compose(g[t.avoided], f[t.avoided])));
  CHECK(verify_amalgam(c, f[t.color], f[t.avoided], t.amalgam));
  // chi is the coloring the argument describes.
  for (std::size_t i = 0; i < t.chi.domain.size(); ++i) {
    bool factors = false;
    for (MorphismId y : c.hom(2, 5)) factors |= c.compose(y, f[0]) == t.chi.domain[i];
    CHECK(t.chi.values[i] == (factors ? 0 : 1));
  }

  // Equal f_i factor trivially.
  const std::vector<MorphismId> same{f[0], f[0]};
  const auto t2 = claim1_extract(c, 1, 2, 2, 5, g, same);
  CHECK(t2.color == 0);
  CHECK(t2.avoided == 1);
  CHECK(c.compose(t2.g, same[0]) == c.compose(t2.x, same[1]));

  CHECK_THROWS_AS(claim1_extract(c, 1, 2, 2, 4, g, f), Error);  // LO5 -/-> (LO3)^LO2_{2,1}
  try {
    claim1_extract(c, 1, 2, 2, 4, g, f);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ArrowDoesNotHold);
  }
  const auto t3 = claim1_search(c, 1, f);
  CHECK(verify_amalgam(c, f[t3.color], f[t3.avoided], t3.amalgam));
}

TEST_CASE("claim 1 with three colors on two-point orders") {
  const auto c = testcat::lo(5);
  // A = LO1 has degree 1; k = 3 needs D -> (C)^LO1_{3,2}, which C itself satisfies.
  const std::vector<MorphismId> f{c.hom(0, 1)[0], c.hom(0, 1)[1], c.hom(0, 2)[1]};
  const auto t = claim1_search(c, 0, f);
  CHECK(verify_amalgam(c, f[t.color], f[t.avoided], t.amalgam));
}

TEST_CASE("failure chains") {
  const auto lo = testcat::lo(9);
  const auto c0 = failure_chain(lo, 1, 3, up_to_five);
  CHECK(c0.arrows.empty());
  CHECK(c0.reached_amalgamation_arrow);
  CHECK(failure_chain(lo, 1, 0, up_to_five).arrows.empty());

  const auto v = vee();
  const auto chain = failure_chain(v, 0, 2);
  REQUIRE(chain.arrows.size() == 2);
  CHECK(chain.arrows[0] == *v.find_morphism("g"));
  CHECK(chain.arrows[1] == *v.find_morphism("h"));
  for (std::size_t i = 0; i < chain.arrows.size(); ++i)
    for (std::size_t j = i + 1; j < chain.arrows.size(); ++j)
      CHECK_FALSE(brute_amalgamable(v, chain.arrows[i], chain.arrows[j]));
  // A chain of length k refutes 2-out-of-k.
  CHECK(two_of_k_check(v, 0, static_cast<int>(chain.arrows.size())).status == Status::Fails);
  CHECK(failure_chain(v, 0, 0).arrows.empty());
}
