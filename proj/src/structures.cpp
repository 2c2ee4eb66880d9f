#include "rw/structures.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "rw/error.hpp"

namespace rw {

Signature::Signature(std::vector<RelationSymbol> relations, std::vector<std::string> constants)
    : relations_(std::move(relations)), constants_(std::move(constants)) {
  std::set<std::string_view> names;
  for (const auto& r : relations_) {
    if (r.arity < 1) throw Error(ErrorCode::InvalidStructure, "relation '" + r.name + "' has arity < 1");
    if (!names.insert(r.name).second) throw Error(ErrorCode::InvalidStructure, "duplicate symbol '" + r.name + "'");
  }
  for (const auto& c : constants_) {
    if (!names.insert(c).second) throw Error(ErrorCode::InvalidStructure, "duplicate symbol '" + c + "'");
  }
}

std::optional<int> Signature::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Signature::constant_index(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i)
    if (constants_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

Structure::Structure(Signature signature, int size, std::vector<std::vector<Tuple>> relations,
                     std::vector<int> constants)
    : signature_(std::move(signature)), size_(size), relations_(std::move(relations)),
      constants_(std::move(constants)) {
  if (size_ < 0) throw Error(ErrorCode::InvalidStructure, "negative size");
  const auto& syms = signature_.relations();
  if (relations_.size() != syms.size())
    throw Error(ErrorCode::InvalidStructure, "relation table count does not match the signature");
  for (std::size_t r = 0; r < syms.size(); ++r) {
    for (const auto& t : relations_[r]) {
      if (static_cast<int>(t.size()) != syms[r].arity)
        throw Error(ErrorCode::InvalidStructure, "tuple of wrong arity in '" + syms[r].name + "'");
      for (int x : t)
        if (x < 0 || x >= size_)
          throw Error(ErrorCode::InvalidStructure, "tuple entry out of range in '" + syms[r].name + "'");
    }
    std::sort(relations_[r].begin(), relations_[r].end());
    relations_[r].erase(std::unique(relations_[r].begin(), relations_[r].end()), relations_[r].end());
  }
  if (constants_.size() != signature_.constants().size())
    throw Error(ErrorCode::InvalidStructure, "constant map is not total");
  for (int c : constants_)
    if (c < 0 || c >= size_) throw Error(ErrorCode::InvalidStructure, "constant out of range");
}

bool Structure::holds(int r, std::span<const int> tuple) const {
  const auto& rel = relations_[r];
  return std::binary_search(rel.begin(), rel.end(), tuple,
                            [](const auto& a, const auto& b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                            });
}

Structure Structure::relabeled(std::span<const int> relabel) const {
  std::vector<std::vector<Tuple>> rels(relations_.size());
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    rels[r].reserve(relations_[r].size());
    for (const auto& t : relations_[r]) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = relabel[t[i]];
      rels[r].push_back(std::move(u));
    }
  }
  std::vector<int> consts(constants_.size());
  for (std::size_t c = 0; c < constants_.size(); ++c) consts[c] = relabel[constants_[c]];
  return Structure(signature_, size_, std::move(rels), std::move(consts));
}

std::strong_ordering Structure::operator<=>(const Structure& other) const {
  if (auto c = size_ <=> other.size_; c != 0) return c;
  if (auto c = relations_ <=> other.relations_; c != 0) return c;
  return constants_ <=> other.constants_;
}

namespace {

void require_same_signature(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature()))
    throw Error(ErrorCode::SignatureMismatch, "structures have different signatures");
}

// Backtracking over injective partial maps. When element p is assigned, every
// tuple over {0..p} containing p must hold in the source iff its image holds
// in the target (preservation and reflection at once).
class EmbeddingSearch {
 public:
  EmbeddingSearch(const Structure& src, const Structure& tgt) : src_(src), tgt_(tgt) {
    require_same_signature(src, tgt);
    map_.assign(src.size(), -1);
    used_.assign(tgt.size(), false);
  }

  template <class Visit>
  void run(Visit&& visit) {
    if (src_.size() > tgt_.size()) return;
    extend(0, visit);
  }

 private:
  template <class Visit>
  bool extend(int p, Visit& visit) {
    if (p == src_.size()) return visit(map_);
    for (int x = 0; x < tgt_.size(); ++x) {
      if (used_[x]) continue;
      map_[p] = x;
      if (consistent(p)) {
        used_[x] = true;
        const bool keep_going = extend(p + 1, visit);
        used_[x] = false;
        if (!keep_going) return false;
      }
    }
    map_[p] = -1;
    return true;
  }

  bool consistent(int p) {
    const auto& consts = src_.constants();
    for (std::size_t c = 0; c < consts.size(); ++c)
      if (consts[c] == p && tgt_.constant(static_cast<int>(c)) != map_[p]) return false;
    for (std::size_t c = 0; c < consts.size(); ++c)
      if (tgt_.constant(static_cast<int>(c)) == map_[p] && consts[c] != p) return false;
    for (int r = 0; r < src_.relation_count(); ++r) {
      const int arity = src_.signature().relations()[r].arity;
      // Every tuple over {0..p} containing p must agree in both structures.
      Tuple t(arity, 0), image(arity);
      const int base = p + 1;
      long total = 1;
      for (int i = 0; i < arity; ++i) total *= base;
      for (long code = 0; code < total; ++code) {
        long rest = code;
        bool has_p = false;
        for (int i = arity - 1; i >= 0; --i) {
          t[i] = static_cast<int>(rest % base);
          rest /= base;
          has_p |= t[i] == p;
        }
        if (!has_p) continue;
        for (int i = 0; i < arity; ++i) image[i] = map_[t[i]];
        if (src_.holds(r, t) != tgt_.holds(r, image)) return false;
      }
    }
    return true;
  }

  const Structure& src_;
  const Structure& tgt_;
  ElementMap map_;
  std::vector<bool> used_;
};

}  // namespace

bool is_embedding(const Structure& source, const Structure& target, std::span<const int> map) {
  if (!(source.signature() == target.signature())) return false;
  if (static_cast<int>(map.size()) != source.size()) return false;
  std::vector<bool> seen(target.size(), false);
  for (int x : map) {
    if (x < 0 || x >= target.size() || seen[x]) return false;
    seen[x] = true;
  }
  for (std::size_t c = 0; c < source.constants().size(); ++c)
    if (map[source.constant(static_cast<int>(c))] != target.constant(static_cast<int>(c))) return false;
  for (int r = 0; r < source.relation_count(); ++r) {
    for (const auto& t : source.relation(r)) {
      Tuple image(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) image[i] = map[t[i]];
      if (!target.holds(r, image)) return false;
    }
    // Reflection: every target tuple inside the image must come from a source tuple.
    std::vector<int> preimage(target.size(), -1);
    for (std::size_t i = 0; i < map.size(); ++i) preimage[map[i]] = static_cast<int>(i);
    for (const auto& t : target.relation(r)) {
      Tuple back(t.size());
      bool inside = true;
      for (std::size_t i = 0; i < t.size() && inside; ++i) {
        back[i] = preimage[t[i]];
        inside = back[i] >= 0;
      }
      if (inside && !source.holds(r, back)) return false;
    }
  }
  return true;
}

std::vector<ElementMap> enumerate_embeddings(const Structure& source, const Structure& target) {
  std::vector<ElementMap> out;
  EmbeddingSearch search(source, target);
  search.run([&](const ElementMap& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::size_t count_embeddings(const Structure& source, const Structure& target) {
  std::size_t n = 0;
  EmbeddingSearch search(source, target);
  search.run([&](const ElementMap&) {
    ++n;
    return true;
  });
  return n;
}

std::vector<ElementMap> automorphisms(const Structure& a) { return enumerate_embeddings(a, a); }

namespace {

// Dense membership tables for the canonical-form search. Relations that are
// empty contribute constant zero bits and are skipped.
struct DenseRelation {
  int relation = 0;
  int arity = 0;
  std::vector<bool> bits;  // indexed by sum t[i] * n^(arity-1-i)
};

class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Structure& a) : a_(a), n_(a.size()) {
    for (int r = 0; r < a.relation_count(); ++r) {
      if (a.relation(r).empty()) continue;
      DenseRelation d;
      d.relation = r;
      d.arity = a.signature().relations()[r].arity;
      long cells = 1;
      for (int i = 0; i < d.arity; ++i) cells *= n_;
      d.bits.assign(static_cast<std::size_t>(cells), false);
      for (const auto& t : a.relation(r)) d.bits[encode(t)] = true;
      dense_.push_back(std::move(d));
    }
    order_.assign(n_, -1);
    used_.assign(n_, false);
  }

  CanonicalForm run() {
    std::vector<std::vector<bool>> blocks(n_);
    descend(0, blocks);
    ElementMap iso(n_);
    for (int p = 0; p < n_; ++p) iso[best_order_[p]] = p;
    if (n_ == 0) return {a_, iso};
    return {a_.relabeled(iso), iso};
  }

 private:
  std::size_t encode(std::span<const int> t) const {
    std::size_t code = 0;
    for (int x : t) code = code * n_ + x;
    return code;
  }

  // Bits contributed when the original element order_[p] receives label p:
  // constants landing on p, then for each relation all tuples over labels
  // {0..p} that contain p, in lexicographic order of the labels.
  std::vector<bool> block(int p) const {
    std::vector<bool> bits;
    for (int c : a_.constants()) bits.push_back(c == order_[p]);
    Tuple labels, original;
    for (const auto& d : dense_) {
      labels.assign(d.arity, 0);
      original.resize(d.arity);
      const int base = p + 1;
      long total = 1;
      for (int i = 0; i < d.arity; ++i) total *= base;
      for (long code = 0; code < total; ++code) {
        long rest = code;
        bool has_p = false;
        for (int i = d.arity - 1; i >= 0; --i) {
          labels[i] = static_cast<int>(rest % base);
          rest /= base;
          has_p |= labels[i] == p;
        }
        if (!has_p) continue;
        for (int i = 0; i < d.arity; ++i) original[i] = order_[labels[i]];
        bits.push_back(d.bits[encode(original)]);
      }
    }
    return bits;
  }

  // Compares blocks[0..p] with the incumbent. The incumbent can change while a
  // subtree is explored, so the comparison is redone rather than inherited.
  int compare_prefix(const std::vector<std::vector<bool>>& blocks, int p) const {
    for (int i = 0; i <= p; ++i) {
      if (blocks[i] < best_blocks_[i]) return -1;
      if (blocks[i] > best_blocks_[i]) return 1;
    }
    return 0;
  }

  void descend(int p, std::vector<std::vector<bool>>& blocks) {
    if (p == n_) {
      if (!have_best_ || compare_prefix(blocks, n_ - 1) < 0) {
        have_best_ = true;
        best_blocks_ = blocks;
        best_order_ = order_;
      }
      return;
    }
    for (int x = 0; x < n_; ++x) {
      if (used_[x]) continue;
      order_[p] = x;
      blocks[p] = block(p);
      if (have_best_ && compare_prefix(blocks, p) > 0) continue;
      used_[x] = true;
      descend(p + 1, blocks);
      used_[x] = false;
    }
  }

  const Structure& a_;
  int n_;
  std::vector<DenseRelation> dense_;
  std::vector<int> order_;
  std::vector<bool> used_;
  bool have_best_ = false;
  std::vector<std::vector<bool>> best_blocks_;
  std::vector<int> best_order_;
};

}  // namespace

CanonicalForm canonical_form(const Structure& a) { return CanonicalSearch(a).run(); }

ElementMap compose_maps(std::span<const int> outer, std::span<const int> inner) {
  ElementMap out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

ElementMap invert_map(std::span<const int> bijection) {
  ElementMap out(bijection.size());
  for (std::size_t i = 0; i < bijection.size(); ++i) out[bijection[i]] = static_cast<int>(i);
  return out;
}

ElementMap identity_map(int n) {
  ElementMap out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

Signature order_signature() { return Signature({{"<", 2}}, {}); }

Signature graph_signature() { return Signature({{"E", 2}}, {}); }

Structure linear_order(int n) {
  std::vector<Tuple> lt;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lt.push_back({i, j});
  return Structure(order_signature(), n, {std::move(lt)});
}

Structure graph(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<Tuple> e;
  for (auto [u, v] : edges) {
    if (u == v) throw Error(ErrorCode::InvalidStructure, "graph loops are not allowed");
    e.push_back({u, v});
    e.push_back({v, u});
  }
  return Structure(graph_signature(), n, {std::move(e)});
}

Structure path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return graph(n, edges);
}

Structure complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return graph(n, edges);
}

Structure empty_graph(int n) { return graph(n, {}); }

std::vector<Structure> all_graphs(int max_vertices) {
  std::vector<Structure> out;
  for (int n = 1; n <= max_vertices; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::set<Structure> reps;
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<std::pair<int, int>> edges;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask >> b & 1u) edges.push_back(pairs[b]);
      reps.insert(canonical_form(graph(n, edges)).structure);
    }
    out.insert(out.end(), reps.begin(), reps.end());
  }
  return out;
}

}  // namespace rw
