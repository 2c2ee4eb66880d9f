#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rw/category.hpp"
#include "rw/search.hpp"

namespace rw {

/// A k-coloring of a hom-set, listed in hom-set order.
struct Coloring {
  std::vector<MorphismId> domain;
  int k = 1;
  std::vector<int> values;

  int operator()(std::size_t index) const { return values[index]; }
  int distinct_colors() const;
};

struct ArrowOptions {
  SearchLimits limits;
  Execution exec = Execution::Parallel;
};

struct ArrowVerdict {
  Status status = Status::Holds;
  std::optional<Coloring> bad_coloring;  // present iff FAILS
  SearchStats stats;
};

/// Decides C -> (B)^A_{k,t}: every k-coloring of hom(A, C) admits w in
/// hom(B, C) with |chi(w . hom(A, B))| <= t. Searches for a bad coloring.
/// Throws EmptyHom when hom(A, B) is empty (the relation is vacuous).
ArrowVerdict arrow_check(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t,
                         const ArrowOptions& options = {});

/// Same relation by enumerating all k^|hom(A,C)| colorings, no pruning and
/// no symmetry. Throws BudgetExceeded when that count exceeds `budget`.
ArrowVerdict oracle_arrow_check(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t,
                                std::uint64_t budget = 1ull << 24);

/// Replays a bad coloring: every w in hom(B, C) must see more than t colors.
bool verify_bad_coloring(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int t,
                         const Coloring& chi);

struct WitnessSearch {
  std::optional<ObjectId> witness;
  /// Some candidate before the witness (or any, if none) ended UNKNOWN.
  bool incomplete = false;
};

/// First candidate C (in the given order) with C -> (B)^A_{k,t}.
WitnessSearch find_ramsey_witness(const FiniteCategory& cat, std::span<const ObjectId> candidates, ObjectId b,
                                  ObjectId a, int k, int t, const ArrowOptions& options = {});

/// DIMACS CNF whose models, projected on the color variables, are exactly the
/// bad colorings; UNSAT iff the arrow relation holds. Variable i*k + c + 1
/// means "morphism i of hom(A, C) has color c".
std::string export_cnf(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t);

}  // namespace rw
