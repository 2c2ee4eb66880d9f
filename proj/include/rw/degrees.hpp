#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rw/arrows.hpp"

namespace rw {

struct DegreeOptions {
  ArrowOptions arrow;
  /// Only objects B of at most this many elements are quantified over
  /// (structure-backed catalogs; 0 = no limit).
  int max_b_size = 0;
};

struct UpperCertificate {
  ObjectId b = 0;
  int k = 1;
  ObjectId witness = 0;  // witness -> (b)^a_{k,n}
};

struct DegreeUpper {
  /// Least n with a witness for every (B, k); absent when none up to the
  /// largest |hom(A, C)| works.
  std::optional<int> degree;
  /// HOLDS when `degree` (or its absence) is exact for the catalog, UNKNOWN
  /// when a search budget made a smaller n undecided.
  Status status = Status::Holds;
  std::vector<UpperCertificate> certificates;
  /// For each rejected n below `degree`: a (B, k) pair with no witness.
  std::vector<std::pair<int, UpperCertificate>> rejections;
  int k_max = 1;
};

DegreeUpper degree_upper(const FiniteCategory& cat, ObjectId a, int k_max, const DegreeOptions& options = {});

struct LowerCertificate {
  ObjectId c = 0;
  Coloring bad_coloring;  // a k-coloring of hom(A, c) where every copy of B sees >= n colors
};

struct DegreeLower {
  std::optional<ObjectId> b;
  std::vector<LowerCertificate> certificates;  // one per catalog object
  /// A candidate B was skipped because some arrow check ran out of budget.
  bool incomplete = false;
};

/// First B (canonical order, A -> B) such that arrow_check(C, B, A, k, n-1)
/// fails for every C in the catalog. Requires n >= 2.
DegreeLower degree_lower(const FiniteCategory& cat, ObjectId a, int k, int n, const DegreeOptions& options = {});

struct EssentialityVerdict {
  Status status = Status::Holds;
  /// essential_at: a coloring chi of hom(A, F) defeating every w.
  std::optional<Coloring> counterexample;
  /// essential: the (B, w) at which the restriction is not essential.
  std::optional<std::pair<ObjectId, MorphismId>> at;
  SearchStats stats;
};

/// For every k <= k_max and every k-coloring chi of hom(A, F) some
/// w in hom(B, F) has ker lambda contained in ker chi^(w), where
/// chi^(w)(f) = chi(w . f). `lambda` colors hom(A, B) (A = its domain's source).
/// A bad chi for some k is also bad for k_max, so only k_max is searched.
/// Throws TrivialColoring when lambda's palette has fewer than 2 colors.
EssentialityVerdict essential_at(const FiniteCategory& cat, const Coloring& lambda, ObjectId f, int k_max,
                                 const ArrowOptions& options = {});

/// essential_at(gamma^(w)) for every catalog B with A -> B and every
/// w in hom(B, F). Throws TrivialColoring unless gamma uses at least 2 colors.
EssentialityVerdict essential(const FiniteCategory& cat, const Coloring& gamma, int k_max,
                              const ArrowOptions& options = {});

struct UnavoidableSearch {
  std::optional<Coloring> coloring;
  bool incomplete = false;  // some candidate ended UNKNOWN
  std::size_t candidates_tried = 0;
};

/// First surjective t-coloring of hom(A, F), in restricted-growth order, that
/// passes `essential`. Requires t >= 2.
UnavoidableSearch search_unavoidable(const FiniteCategory& cat, ObjectId a, ObjectId f, int t, int k_max,
                                     const ArrowOptions& options = {});

/// gamma^(w) as a coloring of hom(A, B), for w in hom(B, F).
Coloring restrict_coloring(const FiniteCategory& cat, const Coloring& gamma, MorphismId w);

}  // namespace rw
