#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rw/category.hpp"

namespace rw {

/// The expansion that colors, for every skeleton representative A, the arrows
/// A -> C with t_A colors. Degrees are indexed by isomorphism class.
class ExpansionContext {
 public:
  /// `degrees` maps objects to t >= 1; every object of a class must agree.
  /// Classes without an entry get 1.
  ExpansionContext(const FiniteCategory& cat, const std::map<ObjectId, int>& degrees = {});

  const FiniteCategory& category() const { return *cat_; }
  const Skeletonization& skeleton() const { return skel_; }
  const std::vector<ObjectId>& representatives() const { return skel_.representatives; }
  int rep_count() const { return static_cast<int>(skel_.representatives.size()); }
  int degree(int rep) const { return degrees_[rep]; }

 private:
  const FiniteCategory* cat_;
  Skeletonization skel_;
  std::vector<int> degrees_;
};

/// C* = (C, theta): theta[r][i] colors the i-th arrow of hom(rep_r, C).
struct ExpandedObject {
  ObjectId base = 0;
  std::vector<std::vector<int>> theta;

  auto operator<=>(const ExpandedObject&) const = default;
};

/// Restricts the representatives an age looks at; nullopt means all of them.
using ObjectFilter = std::optional<std::span<const ObjectId>>;

/// Fibers indexed by base object; the whole expanded catalog or a sub-collection.
using ExpandedCatalog = std::vector<std::vector<ExpandedObject>>;

/// prod_r t_r^{|hom(rep_r, C)|}, or nullopt past 2^63.
std::optional<std::uint64_t> fiber_size(const ExpansionContext& ctx, ObjectId c);

/// All coloring families on C in lexicographic order of theta. Throws Overflow
/// when there would be more than `limit`.
std::vector<ExpandedObject> enumerate_expansions(const ExpansionContext& ctx, ObjectId c,
                                                 std::uint64_t limit = 1u << 20);

/// Every fiber of the category.
ExpandedCatalog expand_catalog(const ExpansionContext& ctx, std::uint64_t limit = 1u << 20);

/// Throws InvalidStructure unless x has the right shape and palette.
void validate_expanded(const ExpansionContext& ctx, const ExpandedObject& x);

struct MorphismVerdict {
  Status status = Status::Holds;
  std::optional<std::pair<int, MorphismId>> offending;  // (rep, e) with delta(f . e) != theta(e)
};

MorphismVerdict expansion_morphism_check(const ExpansionContext& ctx, MorphismId f, const ExpandedObject& c_star,
                                         const ExpandedObject& d_star);
bool is_expanded_morphism(const ExpansionContext& ctx, MorphismId f, const ExpandedObject& c_star,
                          const ExpandedObject& d_star);

/// B*|e for e: A -> U(B*): theta'(h) = theta(e . h).
ExpandedObject restriction(const ExpansionContext& ctx, const ExpandedObject& b_star, MorphismId e);

/// F* . g for g in Aut(F): the expansion with g: F* . g -> F*.
ExpandedObject logical_action(const ExpansionContext& ctx, const ExpandedObject& f_star, MorphismId g);

/// Pulls expansions of representatives back along the canonical isomorphisms.
/// `rep_fibers[r]` holds expansions of representative r; the result is indexed by object.
ExpandedCatalog transport_expansion(const ExpansionContext& ctx, const std::vector<std::vector<ExpandedObject>>& rep_fibers);

struct ReasonableWitness {
  int a_star = 0;       // index into the fiber of A
  MorphismId e = 0;
  int b_star = 0;       // index into the fiber of B
};

struct ForgetfulReport {
  Status surjective = Status::Holds;
  std::optional<ObjectId> empty_fiber;
  Status injective_on_homs = Status::Holds;  // composition closed, identities present, no duplicate morphisms
  std::optional<std::string> injective_failure;
  Status reasonable = Status::Holds;
  std::optional<std::pair<int, MorphismId>> reasonable_failure;  // (A* index in fiber of source(e), e)
  std::vector<ReasonableWitness> reasonable_witnesses;
  std::uint64_t reasonable_checked = 0;
  Status unique_restrictions = Status::Holds;
  std::optional<std::pair<int, MorphismId>> restriction_failure;  // (B* index in fiber of target(e), e)
  std::uint64_t restrictions_checked = 0;
  Status precompact = Status::Holds;  // finite, duplicate-free fibers
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fiber_counts;  // (actual, formula) per object
  bool counts_match = true;

  Status status() const { return surjective && injective_on_homs && reasonable && unique_restrictions && precompact; }
};

/// Checks the forgetful functor on the given fibers (by default all of them).
ForgetfulReport check_forgetful(const ExpansionContext& ctx, const ExpandedCatalog& fibers,
                                bool record_witnesses = true);

/// Theta' = Theta plus R_m_j (m a representative index, j = 1..t_m) of arity |rep_m|.
Signature expanded_signature(const ExpansionContext& ctx);
/// The Theta'-structure: the tuple (e(0), ..., e(n-1)) of every arrow e lies in R_m_{theta(e)+1}.
Structure render(const ExpansionContext& ctx, const ExpandedObject& x);
/// Inverse of render. Throws InvalidStructure naming the violated condition
/// (disjointness, tuples that are not arrows, uncolored arrows).
ExpandedObject unrender(const ExpansionContext& ctx, ObjectId base, const Structure& s);

struct AgeEntry {
  Structure key;  // canonical form of the rendering
  ExpandedObject object;  // first restriction found with this key
};

/// Restrictions of F* along every arrow out of a representative whose class
/// meets `catalog`, up to expanded isomorphism.
std::vector<AgeEntry> age(const ExpansionContext& ctx, const ExpandedObject& f_star, ObjectFilter catalog = {});

/// Same restrictions as fibers (not identified up to isomorphism), for expansion_property_check.
ExpandedCatalog age_fibers(const ExpansionContext& ctx, const ExpandedObject& f_star, ObjectFilter catalog = {});

struct OrbitAgeReport {
  ObjectId f = 0;
  std::vector<ObjectId> catalog;  // representatives the ages range over
  std::vector<ExpandedObject> expansions;
  std::vector<std::vector<int>> orbits;  // indices into expansions, sorted
  std::vector<int> age_of;               // expansion -> index into ages
  std::vector<std::vector<Structure>> ages;  // sorted keys
  Status orbit_invariance = Status::Holds;
  std::optional<std::pair<int, int>> invariance_failure;
  std::vector<int> minimal_ages;  // inclusion-minimal age indices
  int selected = 0;               // lex-least expansion with a minimal age
};

/// Ages range over `catalog`; by default every representative except the
/// class of F, since F* itself would make every age distinct.
OrbitAgeReport orbit_age_analysis(const ExpansionContext& ctx, ObjectId f, ObjectFilter catalog = {},
                                  std::uint64_t limit = 1u << 16);

struct EpEntry {
  ObjectId a = 0;
  std::optional<ObjectId> b;  // direct definition witness
  int candidates_tried = 0;
};

struct EpAltEntry {
  ObjectId d = 0;
  int d_star = 0;
  std::optional<ObjectId> b;
};

struct ExpansionPropertyReport {
  Status direct = Status::Holds;
  Status alternative = Status::Holds;
  bool disagreement = false;
  std::vector<EpEntry> entries;
  std::vector<EpAltEntry> alt_entries;
};

/// Quantifies over objects with a nonempty designated fiber. B is searched in
/// canonical order among those objects; `max_candidates` (0 = all) bounds the
/// search and a miss past the bound is UNKNOWN.
ExpansionPropertyReport expansion_property_check(const ExpansionContext& ctx, const ExpandedCatalog& designated,
                                                 int max_candidates = 0);

}  // namespace rw
