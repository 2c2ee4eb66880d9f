#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rw/arrows.hpp"

namespace rw {

/// The objects the universal quantifiers (A, A', B, C, B_i) range over. D is
/// always searched in the whole category, so loading a larger ambient
/// category gives amalgams room. nullopt means every object.
using Domain = std::optional<std::span<const ObjectId>>;

struct AmalgamWitness {
  ObjectId d = 0;
  MorphismId r = 0, s = 0;  // r . g = s . h
};

/// First D (canonical order) with r in hom(B, D), s in hom(C, D) and
/// r . g = s . h, where g: X -> B and h: X -> C share their source.
std::optional<AmalgamWitness> find_amalgam(const FiniteCategory& cat, MorphismId g, MorphismId h);
bool verify_amalgam(const FiniteCategory& cat, MorphismId g, MorphismId h, const AmalgamWitness& w);

struct AmalgamInstance {
  MorphismId g = 0, h = 0;  // both out of the target of f
  AmalgamWitness witness;   // amalgamates g . f and h . f
};

struct AmalgamationArrowVerdict {
  MorphismId f = 0;
  Status status = Status::Holds;
  std::vector<AmalgamInstance> witnesses;
  /// First (g, h) (targets in canonical order, then hom order) with no amalgam of g . f and h . f.
  std::optional<std::pair<MorphismId, MorphismId>> failure;
};

/// Whether every g, h out of the target of f (into domain objects) amalgamate over f.
AmalgamationArrowVerdict is_amalgamation_arrow(const FiniteCategory& cat, MorphismId f, Domain domain = {},
                                               Execution exec = Execution::Parallel);

struct WapEntry {
  ObjectId a = 0;
  std::optional<AmalgamationArrowVerdict> arrow;  // the first amalgamation arrow found
  int candidates_tried = 0;
};

struct WapReport {
  Status status = Status::Holds;
  std::vector<WapEntry> entries;
};

/// For each domain object A tries the arrows out of A (id_A first, then
/// domain targets in canonical order) until one is an amalgamation arrow.
/// FAILS when some A has none.
WapReport wap_check(const FiniteCategory& cat, Domain domain = {}, Execution exec = Execution::Parallel);

struct TwoOfKReport {
  Status status = Status::Holds;
  int k = 2;
  int morphisms = 0;  // arrows out of A that were compared
  /// k pairwise non-amalgamable arrows out of A, when FAILS.
  std::vector<MorphismId> refutation;
};

/// Among any k arrows out of A some pair amalgamates over A. Searches for a
/// k-clique in the graph of non-amalgamable pairs. Requires k >= 2.
TwoOfKReport two_of_k_check(const FiniteCategory& cat, ObjectId a, int k, Domain domain = {});

struct Claim1Transcript {
  Coloring chi;          // on hom(A, D)
  MorphismId x = 0;      // C -> D seeing at most k - 1 colors on x . hom(A, C)
  int avoided = 0;       // j
  int color = 0;         // i = chi(x . g_j . f_j)
  MorphismId g = 0;      // B_i -> D with g . f_i = x . g_j . f_j
  AmalgamWitness amalgam;  // amalgamates f_i and f_j: r = g, s = x . g_j
};

/// Runs the pigeonhole argument showing that two of f_0..f_{k-1} amalgamate,
/// given g_i: B_i -> C and D -> (C)^A_{k,k-1}. Throws ArrowDoesNotHold when D
/// lacks the arrow property and FactorSearchFailed if a factorization the
/// argument promises is missing.
Claim1Transcript claim1_extract(const FiniteCategory& cat, ObjectId a, int k, ObjectId c, ObjectId d,
                                std::span<const MorphismId> g_list, std::span<const MorphismId> f_list,
                                const ArrowOptions& options = {});

/// Picks C (first object receiving every B_i, with the first morphisms) and D
/// (first Ramsey witness for C) and then runs claim1_extract.
Claim1Transcript claim1_search(const FiniteCategory& cat, ObjectId a, std::span<const MorphismId> f_list,
                               const ArrowOptions& options = {});

struct ChainStep {
  MorphismId f = 0;  // f_i: A -> C_i
  MorphismId g = 0;  // g_i: C_i -> B_{i+1}
  MorphismId h = 0;  // h_i: C_i -> C_{i+1}
};

struct FailureChain {
  std::vector<ChainStep> steps;
  /// g_i . f_i for every step, then f_n = h_{n-1} . f_{n-1}; pairwise non-amalgamable.
  std::vector<MorphismId> arrows;
  /// The iteration stopped at an amalgamation arrow (rather than at `depth`).
  bool reached_amalgamation_arrow = false;
  int depth = 0;
};

/// Starting from id_A, repeatedly extends a non-amalgamation arrow f_i by the
/// first non-amalgamable pair (g_i, h_i) and sets f_{i+1} = h_i . f_i.
FailureChain failure_chain(const FiniteCategory& cat, ObjectId a, int depth, Domain domain = {},
                           Execution exec = Execution::Parallel);

}  // namespace rw
