#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rw/arrows.hpp"
#include "rw/error.hpp"

using namespace rw;

namespace {

FiniteCategory lo_catalog(int max) {
  std::vector<std::string> names;
  std::vector<Structure> cat;
  for (int n = 1; n <= max; ++n) {
    names.push_back("LO" + std::to_string(n));
    cat.push_back(linear_order(n));
  }
  return FiniteCategory::from_structures(names, cat);
}

FiniteCategory graph_catalog(int max) {
  const auto g = all_graphs(max);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < g.size(); ++i) names.push_back("G" + std::to_string(i));
  return FiniteCategory::from_structures(names, g);
}

// Plain DPLL with unit propagation over a parsed DIMACS text.
struct Cnf {
  int variables = 0;
  std::vector<std::vector<int>> clauses;
};

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      int count;
      ls >> p >> fmt >> cnf.variables >> count;
      continue;
    }
    std::vector<int> clause;
    int lit;
    while (ls >> lit && lit != 0) clause.push_back(lit);
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

bool dpll(const Cnf& cnf, std::vector<int>& value) {
  // value: 0 unassigned, 1 true, -1 false
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& cl : cnf.clauses) {
      int open = 0, last = 0;
      bool sat = false;
      for (int lit : cl) {
        const int v = value[std::abs(lit)];
        if (v == 0) {
          ++open;
          last = lit;
        } else if ((v > 0) == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (open == 0) return false;
      if (open == 1) {
        value[std::abs(last)] = last > 0 ? 1 : -1;
        changed = true;
      }
    }
  }
  int var = 0;
  for (int v = 1; v <= cnf.variables; ++v)
    if (value[v] == 0) {
      var = v;
      break;
    }
  if (var == 0) return true;
  for (int choice : {1, -1}) {
    auto copy = value;
    copy[var] = choice;
    if (dpll(cnf, copy)) {
      value = copy;
      return true;
    }
  }
  return false;
}

bool satisfiable(const std::string& text) {
  const Cnf cnf = parse_dimacs(text);
  std::vector<int> value(cnf.variables + 1, 0);
  return dpll(cnf, value);
}

}  // namespace

TEST_CASE("Ramsey number R(3,3) = 6") {
  const auto c = lo_catalog(6);
  const auto holds = arrow_check(c, 5, 2, 1, 2, 1);
  CHECK(holds.status == Status::Holds);
  CHECK_FALSE(holds.bad_coloring);
  CHECK(oracle_arrow_check(c, 5, 2, 1, 2, 1).status == Status::Holds);

  const auto fails = arrow_check(c, 4, 2, 1, 2, 1);
  REQUIRE(fails.status == Status::Fails);
  REQUIRE(fails.bad_coloring);
  CHECK(verify_bad_coloring(c, 4, 2, 1, 1, *fails.bad_coloring));
  CHECK(oracle_arrow_check(c, 4, 2, 1, 2, 1).status == Status::Fails);
  for (auto exec : {Execution::Serial, Execution::Parallel})
    CHECK(arrow_check(c, 5, 2, 1, 2, 1, {.exec = exec}).status == Status::Holds);
}

TEST_CASE("trivial parameters") {
  const auto c = lo_catalog(4);
  CHECK(arrow_check(c, 3, 2, 1, 1, 1).status == Status::Holds);
  CHECK(oracle_arrow_check(c, 3, 2, 1, 1, 1).status == Status::Holds);
  CHECK(arrow_check(c, 3, 2, 1, 3, 3).status == Status::Holds);
  CHECK(oracle_arrow_check(c, 3, 2, 1, 3, 3).status == Status::Holds);
  CHECK_THROWS_AS(arrow_check(c, 3, 0, 1, 2, 1), Error);  // hom(LO2, LO1) is empty
  CHECK_THROWS_AS(arrow_check(c, 3, 2, 1, 0, 1), Error);
}

TEST_CASE("budget exhaustion yields UNKNOWN") {
  const auto c = lo_catalog(6);
  ArrowOptions o;
  o.limits.node_budget = 10;
  o.limits.use_symmetry = false;
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    o.exec = exec;
    CHECK(arrow_check(c, 5, 2, 1, 2, 1, o).status == Status::Unknown);
  }
}

TEST_CASE("oracle equivalence, symmetry soundness and monotonicity") {
  const auto lo = lo_catalog(5);
  const auto gr = graph_catalog(4);
  std::mt19937_64 rng(11);
  int instances = 0;
  for (const FiniteCategory* cat : {&lo, &gr}) {
    const int n = cat->object_count();
    for (ObjectId c = 0; c < n; ++c)
      for (ObjectId b = 0; b < n; ++b)
        for (ObjectId a = 0; a < n; ++a) {
          if (!cat->arrow(a, b) || !cat->arrow(b, c) || cat->hom(a, c).size() > 10) continue;
          if (cat == &gr && std::uniform_int_distribution<int>(0, 3)(rng) != 0) continue;
          for (int k = 1; k <= 3; ++k)
            for (int t = 1; t <= 2; ++t) {
              const auto want = oracle_arrow_check(*cat, c, b, a, k, t).status;
              ArrowOptions plain;
              plain.limits.use_symmetry = false;
              for (auto exec : {Execution::Serial, Execution::Parallel}) {
                plain.exec = exec;
                const auto with = arrow_check(*cat, c, b, a, k, t, {.exec = exec});
                CHECK(with.status == want);
                CHECK(arrow_check(*cat, c, b, a, k, t, plain).status == want);
                if (with.bad_coloring) CHECK(verify_bad_coloring(*cat, c, b, a, t, *with.bad_coloring));
              }
              if (want == Status::Holds) {
                CHECK(arrow_check(*cat, c, b, a, k, t + 1).status == Status::Holds);
                if (k > 1) CHECK(arrow_check(*cat, c, b, a, k - 1, t).status == Status::Holds);
                for (ObjectId d = 0; d < n; ++d)
                  if (cat->arrow(c, d) && cat->hom(a, d).size() <= 12)
                    CHECK(arrow_check(*cat, d, b, a, k, t).status == Status::Holds);
              }
              ++instances;
            }
        }
  }
  CHECK(instances >= 100);
}

TEST_CASE("serial and parallel report the same coloring") {
  const auto c = lo_catalog(5);
  const auto s = arrow_check(c, 4, 2, 1, 2, 1, {.exec = Execution::Serial});
  const auto p = arrow_check(c, 4, 2, 1, 2, 1, {.exec = Execution::Parallel});
  REQUIRE(s.bad_coloring);
  REQUIRE(p.bad_coloring);
  CHECK(s.bad_coloring->values == p.bad_coloring->values);
}

TEST_CASE("Ramsey witness search") {
  const auto c = lo_catalog(7);
  std::vector<ObjectId> order{0, 1, 2, 3, 4, 5, 6};
  const auto w = find_ramsey_witness(c, order, 2, 1, 2, 1);
  REQUIRE(w.witness);
  CHECK(*w.witness == 5);
  CHECK(*find_ramsey_witness(c, order, 2, 2, 3, 3).witness == 2);
}

TEST_CASE("CNF export matches the search") {
  const auto c = lo_catalog(6);
  CHECK(satisfiable(export_cnf(c, 4, 2, 1, 2, 1)));
  CHECK_FALSE(satisfiable(export_cnf(c, 5, 2, 1, 2, 1)));
  CHECK_FALSE(satisfiable(export_cnf(c, 4, 2, 1, 1, 1)));
  const auto lo = lo_catalog(4);
  for (ObjectId x = 0; x < 4; ++x)
    for (ObjectId b = 0; b <= x; ++b)
      for (ObjectId a = 0; a <= b; ++a)
        for (int k = 1; k <= 3; ++k)
          for (int t = 1; t <= 2; ++t)
            CHECK(satisfiable(export_cnf(lo, x, b, a, k, t)) == (arrow_check(lo, x, b, a, k, t).status == Status::Fails));
}
