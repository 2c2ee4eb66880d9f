#pragma once

#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "rw/category.hpp"

namespace rw {

/// X_0 -> X_1 -> ... -> X_{N-1}, stored by its consecutive bonding arrows.
struct TruncatedSequence {
  std::vector<ObjectId> objects;
  std::vector<MorphismId> bonding;  // bonding[n] = x_n^{n+1}

  int length() const { return static_cast<int>(objects.size()); }
  /// x_n^m for n <= m.
  MorphismId bond(const FiniteCategory& cat, int n, int m) const;
};

/// Throws ShapeMismatch unless every bonding arrow goes X_n -> X_{n+1}.
void validate_sequence(const FiniteCategory& cat, const TruncatedSequence& s);

/// (F, phi): components F_n: X_n -> Y_{phi(n)} with phi nondecreasing and
/// phi(N_X - 1) = N_Y - 1 (the truncated form of cofinality).
struct Transformation {
  std::vector<int> phi;
  std::vector<MorphismId> components;

  bool operator==(const Transformation&) const = default;
};

/// Throws InvalidTransformation when phi or a naturality square is wrong.
void validate_transformation(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                             const Transformation& t);

Transformation identity_transformation(const FiniteCategory& cat, const TruncatedSequence& x);

/// t2 . t1 for t1: X -> Y and t2: Y -> Z. Throws TruncationOverflow when phi_1
/// leaves the part of Y that t2 covers and ShapeMismatch on unequal shapes.
Transformation compose(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                       const TruncatedSequence& z, const Transformation& t2, const Transformation& t1);

struct EquivVerdict {
  Status status = Status::Holds;
  std::vector<int> witness_level;   // per n: the least m that equalizes, when found
  std::optional<int> offending;     // an n with no such m
};

/// T1 ~ T2: for every n some m in [max(phi(n), psi(n)), M] with
/// y^m_{phi(n)} . F_n = y^m_{psi(n)} . G_n. FAILS only when M reaches the last
/// level and the separation persists there; otherwise a miss is UNKNOWN.
EquivVerdict equiv_check(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                         const Transformation& t1, const Transformation& t2, int bound);

/// The constant sequence (A, id) and the constant transformation (f, id).
TruncatedSequence embed_J(const FiniteCategory& cat, ObjectId a, int length);
Transformation lift_J(const FiniteCategory& cat, MorphismId f, int length);

/// g: X -> Y with y . g = t, if any (hom order).
std::optional<MorphismId> factor_through(const FiniteCategory& cat, MorphismId t, MorphismId y);

struct Colimit {
  Structure structure;
  /// Element names: the least (level, element) representing each point.
  std::vector<std::pair<int, int>> names;
  std::vector<ElementMap> cocone;  // c_n: X_n -> colimit
};

/// Union of a chain of embeddings. Points of X_{N-1} are named by their least
/// representative and sorted by name. Requires a structure-backed category.
Colimit colimit(const FiniteCategory& cat, const TruncatedSequence& s);

/// The mediating embedding colim -> T for a cocone d_n: X_n -> T, or nullopt
/// when d is not a cocone or the candidate is not an embedding.
std::optional<ElementMap> mediating_map(const FiniteCategory& cat, const TruncatedSequence& s, const Colimit& colim,
                                        const Structure& target, std::span<const ElementMap> d);

/// Checks (F . G ~ F . H) => (G ~ H) at the given bound for G, H: X -> Y and
/// F: Y -> Z. FAILS reports a violation; UNKNOWN when the bound is too short
/// to separate G and H in Y.
Status mono_test(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                 const TruncatedSequence& z, const Transformation& f, const Transformation& g, const Transformation& h,
                 int bound);

struct FraisseWitness {
  ObjectId c = 0;
  MorphismId f = 0;  // W_m -> C
  int k = 0;
  MorphismId g = 0;  // C -> W_k with g . f . w_n^m = w_n^k
};

struct FraisseLevel {
  int n = 0;
  std::optional<int> m;
  std::vector<FraisseWitness> witnesses;
};

struct WeakFraisseReport {
  Status status = Status::Holds;
  Status cofinal = Status::Holds;     // every catalog object maps into some W_n
  std::vector<std::pair<ObjectId, std::optional<int>>> entry_level;
  Status absorbing = Status::Holds;   // the per-n extension condition
  std::vector<FraisseLevel> levels;
  int m_max = 0, k_max = 0;
};

/// Both conditions of a weak Fraisse sequence with m <= m_max and k <= k_max
/// (capped at the last level). A missing m is UNKNOWN: a longer truncation
/// might supply it.
WeakFraisseReport weak_fraisse_check(const FiniteCategory& cat, const TruncatedSequence& w,
                                     std::span<const ObjectId> catalog, int m_max, int k_max);

struct HomogeneityWitness {
  ObjectId a = 0;
  MorphismId f = 0;
  ObjectId b = 0;
  MorphismId e = 0, i = 0;  // f = i . e
  std::vector<std::pair<MorphismId, MorphismId>> j_to_h;  // i . e = h . j . e
};

struct HomogeneityReport {
  Status status = Status::Holds;
  std::vector<HomogeneityWitness> witnesses;
  std::optional<std::pair<ObjectId, MorphismId>> failure;  // (A, f) without witness
};

/// (W1)/(W2) for every catalog A and f in hom(A, S), with B searched in the catalog.
HomogeneityReport weak_homogeneity_check(const FiniteCategory& cat, ObjectId s, std::span<const ObjectId> catalog);

struct UltrahomogeneityReport {
  Status status = Status::Holds;
  /// (e1, e2, g) with g . e1 = e2.
  std::vector<std::tuple<MorphismId, MorphismId, MorphismId>> witnesses;
  std::optional<std::pair<MorphismId, MorphismId>> failure;
};

/// Every pair e1, e2 in hom(A, F), A in the catalog, is related by an automorphism.
UltrahomogeneityReport ultrahomogeneity_check(const FiniteCategory& cat, ObjectId f,
                                              std::span<const ObjectId> catalog);

}  // namespace rw
