#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "categories.hpp"
#include "rw/degrees.hpp"
#include "rw/error.hpp"

using namespace rw;

namespace {

// Every k-coloring of hom(A, F) must admit w with ker lambda inside ker chi^(w).
Status brute_essential_at(const FiniteCategory& c, const Coloring& lambda, ObjectId f, int k) {
  const ObjectId a = c.source(lambda.domain[0]);
  const ObjectId b = c.target(lambda.domain[0]);
  const auto hom_af = c.hom(a, f);
  const auto hom_ab = c.hom(a, b);
  std::vector<int> chi(hom_af.size(), 0);
  while (true) {
    bool some_w = false;
    for (MorphismId w : c.hom(b, f)) {
      bool contained = true;
      for (std::size_t i = 0; i < hom_ab.size() && contained; ++i)
        for (std::size_t j = 0; j < hom_ab.size() && contained; ++j)
          if (lambda.values[i] == lambda.values[j] &&
              chi[c.index_in_hom(c.compose(w, hom_ab[i]))] != chi[c.index_in_hom(c.compose(w, hom_ab[j]))])
            contained = false;
      if (contained) {
        some_w = true;
        break;
      }
    }
    if (!some_w) return Status::Fails;
    std::size_t i = chi.size();
    while (i > 0 && chi[i - 1] == k - 1) chi[--i] = 0;
    if (i == 0) break;
    ++chi[i - 1];
  }
  return Status::Holds;
}

Coloring on_hom(const FiniteCategory& c, ObjectId a, ObjectId b, std::vector<int> values, int k) {
  const auto h = c.hom(a, b);
  return Coloring{{h.begin(), h.end()}, k, std::move(values)};
}

// Colors an embedding of P3 by whether its first end lands below its last end.
Coloring orientation(const FiniteCategory& c, ObjectId p3, ObjectId x) {
  const Structure& s = c.structure(p3);
  std::vector<int> ends;
  for (int v = 0; v < 3; ++v) {
    int degree = 0;
    for (int u = 0; u < 3; ++u) degree += s.holds(0, std::vector<int>{v, u}) ? 1 : 0;
    if (degree == 1) ends.push_back(v);
  }
  Coloring chi;
  chi.k = 2;
  for (MorphismId e : c.hom(p3, x)) {
    const auto& m = c.morphism_map(e);
    chi.domain.push_back(e);
    chi.values.push_back(m[ends[0]] < m[ends[1]] ? 0 : 1);
  }
  return chi;
}

}  // namespace

TEST_CASE("upper bound for pairs in linear orders") {
  const auto c = testcat::lo(7);
  DegreeOptions o;
  o.max_b_size = 3;
  const auto u = degree_upper(c, 1, 2, o);
  REQUIRE(u.degree);
  CHECK(*u.degree == 1);
  CHECK(u.status == Status::Holds);
  bool lo6 = false;
  for (const auto& cert : u.certificates) {
    CHECK(arrow_check(c, cert.witness, cert.b, 1, cert.k, 1).status == Status::Holds);
    lo6 |= cert.witness == 5;
  }
  CHECK(lo6);
  // Three colors need 17 points for a monochromatic triple, so within 7 points the bound is 2.
  const auto u3 = degree_upper(c, 1, 3, o);
  REQUIRE(u3.degree);
  CHECK(*u3.degree == 2);
  REQUIRE(u3.rejections.size() == 1);
  CHECK(u3.rejections[0].second.b == 2);
  CHECK(u3.rejections[0].second.k == 3);
}

TEST_CASE("a single morphism gives degree one") {
  const auto c = testcat::lo(4);
  const auto u = degree_upper(c, 3, 3);  // hom(LO4, C) has at most one element
  REQUIRE(u.degree);
  CHECK(*u.degree == 1);
}

TEST_CASE("paths of length two have degree at least two") {
  const auto c = testcat::graphs(5);
  const ObjectId p3 = testcat::find_structure(c, path_graph(3));
  const auto l = degree_lower(c, p3, 2, 2);
  REQUIRE(l.b);
  CHECK(*l.b == p3);
  CHECK(l.certificates.size() == static_cast<std::size_t>(c.object_count()));
  for (const auto& cert : l.certificates) {
    CHECK(verify_bad_coloring(c, cert.c, p3, p3, 1, cert.bad_coloring));
    // The orientation coloring is an independent certificate.
    CHECK(verify_bad_coloring(c, cert.c, p3, p3, 1, orientation(c, p3, cert.c)));
  }
  const auto u = degree_upper(c, p3, 2);
  REQUIRE(u.degree);
  CHECK(*u.degree == 2);
  CHECK(u.rejections.front().first == 1);
}

TEST_CASE("no lower bound for pairs in linear orders") {
  const auto c = testcat::lo(7);
  DegreeOptions o;
  o.max_b_size = 3;
  CHECK_FALSE(degree_lower(c, 1, 2, 2, o).b);
  // Without the size limit the catalog is too small to hold a witness for LO4.
  const auto l = degree_lower(c, 1, 2, 2);
  REQUIRE(l.b);
  CHECK(*l.b == 3);
  const auto single = FiniteCategory::from_structures({"LO2"}, {linear_order(2)});
  CHECK_FALSE(degree_lower(single, 0, 2, 2).b);
  CHECK_THROWS_AS(degree_lower(c, 1, 2, 1), Error);
}

TEST_CASE("essentiality at a point") {
  const auto c = testcat::lo(6);
  // Pairs sharing their least point would need three distinct colors on LO4.
  CHECK(essential_at(c, on_hom(c, 1, 2, {0, 0, 1}, 2), 3, 2).status == Status::Holds);
  const auto lambda = on_hom(c, 1, 2, {0, 1, 0}, 2);
  CHECK(essential_at(c, lambda, 5, 2).status == Status::Holds);
  const auto v = essential_at(c, lambda, 3, 2);
  REQUIRE(v.status == Status::Fails);
  REQUIRE(v.counterexample);
  CHECK(brute_essential_at(c, lambda, 3, 2) == Status::Fails);
  // A copy-by-copy check of the counterexample.
  for (MorphismId w : c.hom(2, 3)) {
    const auto r = restrict_coloring(c, *v.counterexample, w);
    CHECK(r.values[0] != r.values[2]);
  }
  const auto injective = on_hom(c, 0, 1, {0, 1}, 2);
  CHECK(essential_at(c, injective, 1, 3).status == Status::Holds);
  CHECK_THROWS_AS(essential_at(c, on_hom(c, 0, 1, {0, 0}, 1), 1, 2), Error);
}

TEST_CASE("essential_at agrees with brute force and respects refinement") {
  const auto c = testcat::lo(5);
  int checked = 0;
  for (ObjectId a = 0; a < 2; ++a)
    for (ObjectId b = a + 1; b < 4; ++b)
      for (ObjectId f = b; f < 5; ++f) {
        const int n = static_cast<int>(c.hom(a, b).size());
        std::vector<int> lambda(n, 0);
        // Every restricted growth string with at least 2 blocks.
        std::vector<std::vector<int>> rgs;
        std::function<void(int, int)> gen = [&](int i, int used) {
          if (i == n) {
            if (used >= 2) rgs.push_back(lambda);
            return;
          }
          for (int x = 0; x <= used; ++x) {
            lambda[i] = x;
            gen(i + 1, std::max(used, x + 1));
          }
        };
        gen(0, 0);
        for (int k = 1; k <= 3; ++k) {
          if (std::pow(k, c.hom(a, f).size()) > 5000) continue;
          std::vector<Status> verdicts;
          for (const auto& values : rgs) {
            const auto l = on_hom(c, a, b, values, n);
            const auto got = essential_at(c, l, f, k).status;
            CHECK(got == brute_essential_at(c, l, f, k));
            verdicts.push_back(got);
            ++checked;
          }
          for (std::size_t i = 0; i < rgs.size(); ++i)
            for (std::size_t j = 0; j < rgs.size(); ++j) {
              // Refining an essential coloring keeps it essential.
              bool finer = true;  // ker rgs[i] inside ker rgs[j]
              for (int x = 0; x < n && finer; ++x)
                for (int y = 0; y < n && finer; ++y)
                  if (rgs[i][x] == rgs[i][y] && rgs[j][x] != rgs[j][y]) finer = false;
              if (finer && verdicts[j] == Status::Holds) CHECK(verdicts[i] == Status::Holds);
            }
        }
      }
  CHECK(checked > 50);
}

TEST_CASE("essential colorings of paths") {
  const auto c = testcat::graphs(4);
  const ObjectId p3 = testcat::find_structure(c, path_graph(3));
  const auto found = search_unavoidable(c, p3, p3, 2, 2);
  REQUIRE(found.coloring);
  CHECK(found.coloring->values == orientation(c, p3, p3).values);
  // Restrictions of an essential coloring are essential at every (B, w).
  const auto v = essential(c, *found.coloring, 2);
  CHECK(v.status == Status::Holds);
  for (ObjectId b = 0; b < c.object_count(); ++b)
    if (c.arrow(p3, b))
      for (MorphismId w : c.hom(b, p3)) {
        const auto r = restrict_coloring(c, *found.coloring, w);
        CHECK(essential_at(c, r, p3, 2).status == Status::Holds);
      }
  // Within a finite catalog, F itself is one of the B's, which forces gamma to
  // separate too much once F has more copies than colors.
  const ObjectId p4 = testcat::find_structure(c, path_graph(4));
  CHECK_FALSE(search_unavoidable(c, p3, p4, 2, 2).coloring);
  CHECK_FALSE(search_unavoidable(c, p3, p3, 3, 2).coloring);  // t > |hom|
  const ObjectId k3 = testcat::find_structure(c, complete_graph(3));
  CHECK_FALSE(search_unavoidable(c, p3, k3, 2, 2).coloring);  // empty hom-set
  CHECK_THROWS_AS(essential(c, Coloring{{c.hom(p3, p3).begin(), c.hom(p3, p3).end()}, 2, {0, 0}}, 2), Error);
}
