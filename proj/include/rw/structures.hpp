#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rw {

struct RelationSymbol {
  std::string name;
  int arity = 0;

  bool operator==(const RelationSymbol&) const = default;
};

/// Relational signature with constants. Function symbols are not supported.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<RelationSymbol> relations, std::vector<std::string> constants);

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }
  std::optional<int> relation_index(std::string_view name) const;
  std::optional<int> constant_index(std::string_view name) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

using Tuple = std::vector<int>;

/// Map from source elements to target elements; `map[i]` is the image of i.
using ElementMap = std::vector<int>;

/// A finite structure over {0..size-1}. Relation tables are kept sorted and
/// deduplicated so that equality is equality of raw data.
class Structure {
 public:
  Structure() = default;
  Structure(Signature signature, int size, std::vector<std::vector<Tuple>> relations,
            std::vector<int> constants = {});

  const Signature& signature() const { return signature_; }
  int size() const { return size_; }
  const std::vector<Tuple>& relation(int r) const { return relations_[r]; }
  int relation_count() const { return static_cast<int>(relations_.size()); }
  int constant(int c) const { return constants_[c]; }
  const std::vector<int>& constants() const { return constants_; }
  bool holds(int r, std::span<const int> tuple) const;

  /// The structure obtained by renaming element i to `relabel[i]`
  /// (`relabel` must be a permutation).
  Structure relabeled(std::span<const int> relabel) const;

  bool operator==(const Structure&) const = default;
  std::strong_ordering operator<=>(const Structure& other) const;

 private:
  Signature signature_;
  int size_ = 0;
  std::vector<std::vector<Tuple>> relations_;
  std::vector<int> constants_;
};

bool is_embedding(const Structure& source, const Structure& target, std::span<const int> map);

/// All embeddings source -> target in lexicographic order of the map.
/// Throws SignatureMismatch when the signatures differ.
std::vector<ElementMap> enumerate_embeddings(const Structure& source, const Structure& target);

/// Number of embeddings, without materializing them.
std::size_t count_embeddings(const Structure& source, const Structure& target);

std::vector<ElementMap> automorphisms(const Structure& a);

struct CanonicalForm {
  Structure structure;
  /// Isomorphism from the input to `structure`.
  ElementMap iso;
};

/// Lexicographically least relabeling (branch and bound over permutations).
/// Two structures are isomorphic iff their canonical structures are equal.
CanonicalForm canonical_form(const Structure& a);

ElementMap compose_maps(std::span<const int> outer, std::span<const int> inner);
ElementMap invert_map(std::span<const int> bijection);
ElementMap identity_map(int n);

// Generators for the catalogs used throughout the tests and the CLI.
Signature order_signature();
Signature graph_signature();
Structure linear_order(int n);
Structure graph(int n, const std::vector<std::pair<int, int>>& edges);
Structure path_graph(int n);
Structure complete_graph(int n);
Structure empty_graph(int n);
/// One representative per isomorphism type of graphs on 1..max_vertices
/// vertices, ordered by size and then by canonical form.
std::vector<Structure> all_graphs(int max_vertices);

}  // namespace rw
