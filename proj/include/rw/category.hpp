#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rw/structures.hpp"
#include "rw/verdict.hpp"

namespace rw {

using ObjectId = int;
using MorphismId = int;

enum class Execution { Serial, Parallel };

/// Composition data for a category given by explicit tables (objects and
/// morphisms are referred to by name).
struct CategoryTables {
  struct HomSet {
    std::string source, target;
    std::vector<std::string> morphisms;
  };
  struct Composite {
    std::string outer, inner, result;  // outer . inner = result
  };
  std::vector<std::string> objects;
  std::vector<HomSet> homs;
  std::vector<Composite> compose;
  std::vector<std::pair<std::string, std::string>> identities;  // object, morphism
};

/// A finite category given by explicit hom-sets. Structure-backed categories
/// compose by composing element maps; table-backed ones look composites up.
/// The opposite category shares storage and flips a flag.
class FiniteCategory {
 public:
  FiniteCategory() = default;

  /// Objects are the catalog structures, morphisms all embeddings between
  /// them. Throws SignatureMismatch if the signatures differ.
  static FiniteCategory from_structures(std::vector<std::string> names, std::vector<Structure> catalog,
                                        Execution exec = Execution::Parallel);
  static FiniteCategory from_tables(const CategoryTables& tables);

  int object_count() const;
  int morphism_count() const;
  const std::string& object_name(ObjectId a) const;
  std::optional<ObjectId> find_object(std::string_view name) const;

  /// True when composition is map composition of embeddings (never for op).
  bool structure_backed() const;
  bool has_structure(ObjectId a) const;
  const Structure& structure(ObjectId a) const;
  bool is_opposite() const { return opposite_; }

  std::span<const MorphismId> hom(ObjectId a, ObjectId b) const;
  bool arrow(ObjectId a, ObjectId b) const { return !hom(a, b).empty(); }
  ObjectId source(MorphismId m) const;
  ObjectId target(MorphismId m) const;
  MorphismId identity(ObjectId a) const;
  /// outer . inner; requires target(inner) == source(outer).
  MorphismId compose(MorphismId outer, MorphismId inner) const;
  /// Position of m inside hom(source(m), target(m)).
  int index_in_hom(MorphismId m) const;

  std::string morphism_name(MorphismId m) const;
  std::optional<MorphismId> find_morphism(std::string_view name) const;
  /// Element map of an embedding (structure-backed categories only).
  const ElementMap& morphism_map(MorphismId m) const;
  std::optional<MorphismId> find_by_map(ObjectId a, ObjectId b, std::span<const int> map) const;

  std::optional<MorphismId> inverse(MorphismId m) const;
  std::vector<MorphismId> automorphisms(ObjectId a) const;

  FiniteCategory op() const;

  /// Same objects, hom-sets, identities and composites (ids compared raw).
  bool same_tables(const FiniteCategory& other) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  bool opposite_ = false;
};

/// Objects ordered by (size, canonical form, id) when structures are
/// attached, by id otherwise.
std::vector<ObjectId> canonical_order(const FiniteCategory& c);

struct AxiomReport {
  bool identity_laws = true;
  bool associativity = true;
  std::optional<std::tuple<MorphismId, MorphismId, MorphismId>> associativity_failure;

  bool all_mono = true;  // left cancellation, (C1)
  std::optional<std::tuple<MorphismId, MorphismId, MorphismId>> mono_failure;  // f, g, h
  bool all_epi = true;   // right cancellation
  std::optional<std::tuple<MorphismId, MorphismId, MorphismId>> epi_failure;

  bool directed = true;
  std::optional<std::pair<ObjectId, ObjectId>> directed_failure;
  bool dually_directed = true;
  std::optional<std::pair<ObjectId, ObjectId>> dually_directed_failure;

  /// (C5): for each B the set {A : A -> B}; `above` is the dual {A : B -> A}.
  std::vector<std::vector<ObjectId>> below;
  std::vector<std::vector<ObjectId>> above;

  /// Finite-objects bullet: each object locally finite for the catalog,
  /// witnesses D and contenders H bounded to catalog objects.
  std::vector<Status> locally_finite;
  Status local_finiteness = Status::Holds;
};

struct AxiomOptions {
  bool check_local_finiteness = true;
  std::uint64_t local_finiteness_budget = 5'000'000;
};

AxiomReport check_axioms(const FiniteCategory& c, const AxiomOptions& options = {});

/// Local finiteness of `f` for the catalog (two-diagram definition).
Status locally_finite(const FiniteCategory& c, ObjectId f, std::uint64_t budget);

struct Skeletonization {
  std::vector<ObjectId> representatives;  // one per isomorphism class
  std::vector<int> class_of;              // object -> index into representatives
  std::vector<MorphismId> canon_iso;      // object C -> isomorphism C -> rep(C)

  ObjectId representative_of(ObjectId c) const { return representatives[class_of[c]]; }
};

/// Structure-backed categories use canonical forms; table-backed ones use
/// their invertible morphisms. Throws MissingIsoData when only some objects
/// carry structures.
Skeletonization skeletonize(const FiniteCategory& c);

}  // namespace rw
