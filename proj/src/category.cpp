#include "rw/category.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <unordered_map>

#include "rw/error.hpp"

namespace rw {

struct FiniteCategory::Data {
  std::vector<std::string> object_names;
  std::unordered_map<std::string, ObjectId> object_lookup;
  std::vector<std::optional<Structure>> structures;
  bool structure_backed = false;

  std::vector<ObjectId> src, tgt;
  std::vector<int> hom_index;
  std::vector<std::vector<MorphismId>> homs;  // row-major object_count x object_count
  std::vector<MorphismId> identities;

  std::vector<ElementMap> maps;  // structure-backed
  std::vector<std::string> names;  // table-backed
  std::unordered_map<std::string, MorphismId> name_lookup;
  std::unordered_map<std::uint64_t, MorphismId> table;

  int n() const { return static_cast<int>(object_names.size()); }
  const std::vector<MorphismId>& hom(ObjectId a, ObjectId b) const { return homs[a * n() + b]; }

  std::optional<MorphismId> by_map(ObjectId a, ObjectId b, std::span<const int> map) const {
    const auto& h = hom(a, b);
    auto it = std::lower_bound(h.begin(), h.end(), map, [&](MorphismId m, std::span<const int> key) {
      return std::lexicographical_compare(maps[m].begin(), maps[m].end(), key.begin(), key.end());
    });
    if (it == h.end() || !std::equal(maps[*it].begin(), maps[*it].end(), map.begin(), map.end()))
      return std::nullopt;
    return *it;
  }

  MorphismId compose(MorphismId outer, MorphismId inner) const {
    if (tgt[inner] != src[outer])
      throw Error(ErrorCode::InvalidCategory, "composition of non-composable morphisms");
    if (structure_backed) {
      const ElementMap m = compose_maps(maps[outer], maps[inner]);
      auto found = by_map(src[inner], tgt[outer], m);
      if (!found) throw Error(ErrorCode::InvalidCategory, "composite embedding missing from hom-set");
      return *found;
    }
    auto it = table.find(key(outer, inner));
    if (it == table.end())
      throw Error(ErrorCode::InvalidCategory,
                  "composite " + names[outer] + "∘" + names[inner] + " is not defined");
    return it->second;
  }

  static std::uint64_t key(MorphismId outer, MorphismId inner) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(outer)) << 32) |
           static_cast<std::uint32_t>(inner);
  }
};

FiniteCategory FiniteCategory::from_structures(std::vector<std::string> names, std::vector<Structure> catalog,
                                               Execution exec) {
  if (names.size() != catalog.size())
    throw Error(ErrorCode::InvalidCategory, "name list and catalog differ in length");
  for (std::size_t i = 1; i < catalog.size(); ++i)
    if (!(catalog[i].signature() == catalog[0].signature()))
      throw Error(ErrorCode::SignatureMismatch, "catalog entry '" + names[i] + "' has a different signature");

  auto d = std::make_shared<Data>();
  const int n = static_cast<int>(catalog.size());
  for (int i = 0; i < n; ++i)
    if (!d->object_lookup.emplace(names[i], i).second)
      throw Error(ErrorCode::InvalidCategory, "duplicate object name '" + names[i] + "'");
  d->object_names = std::move(names);
  d->structure_backed = true;

  // Hom-set enumeration is independent per (a, b) pair.
  std::vector<std::vector<ElementMap>> found(static_cast<std::size_t>(n) * n);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int pair = 0; pair < n * n; ++pair)
      found[pair] = enumerate_embeddings(catalog[pair / n], catalog[pair % n]);
  } else {
    for (int pair = 0; pair < n * n; ++pair)
      found[pair] = enumerate_embeddings(catalog[pair / n], catalog[pair % n]);
  }

  d->homs.resize(found.size());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      auto& maps = found[a * n + b];
      for (std::size_t i = 0; i < maps.size(); ++i) {
        const MorphismId id = static_cast<MorphismId>(d->maps.size());
        d->src.push_back(a);
        d->tgt.push_back(b);
        d->hom_index.push_back(static_cast<int>(i));
        d->maps.push_back(std::move(maps[i]));
        d->homs[a * n + b].push_back(id);
      }
    }
  }
  d->identities.resize(n);
  for (int a = 0; a < n; ++a) {
    auto id = d->by_map(a, a, identity_map(catalog[a].size()));
    d->identities[a] = *id;
  }
  d->structures.reserve(n);
  for (auto& s : catalog) d->structures.emplace_back(std::move(s));

  FiniteCategory c;
  c.data_ = std::move(d);
  return c;
}

FiniteCategory FiniteCategory::from_tables(const CategoryTables& tables) {
  auto d = std::make_shared<Data>();
  const int n = static_cast<int>(tables.objects.size());
  for (int i = 0; i < n; ++i)
    if (!d->object_lookup.emplace(tables.objects[i], i).second)
      throw Error(ErrorCode::InvalidCategory, "duplicate object '" + tables.objects[i] + "'");
  d->object_names = tables.objects;
  d->structures.resize(n);
  d->homs.resize(static_cast<std::size_t>(n) * n);

  auto object = [&](const std::string& name) {
    auto it = d->object_lookup.find(name);
    if (it == d->object_lookup.end()) throw Error(ErrorCode::InvalidCategory, "unknown object '" + name + "'");
    return it->second;
  };
  auto morphism = [&](const std::string& name) {
    auto it = d->name_lookup.find(name);
    if (it == d->name_lookup.end()) throw Error(ErrorCode::InvalidCategory, "unknown morphism '" + name + "'");
    return it->second;
  };

  for (const auto& h : tables.homs) {
    const ObjectId a = object(h.source), b = object(h.target);
    for (const auto& m : h.morphisms) {
      const MorphismId id = static_cast<MorphismId>(d->names.size());
      if (!d->name_lookup.emplace(m, id).second)
        throw Error(ErrorCode::InvalidCategory, "morphism '" + m + "' appears in more than one hom-set");
      d->names.push_back(m);
      d->src.push_back(a);
      d->tgt.push_back(b);
      d->hom_index.push_back(static_cast<int>(d->homs[a * n + b].size()));
      d->homs[a * n + b].push_back(id);
    }
  }

  d->identities.assign(n, -1);
  for (const auto& [obj, m] : tables.identities) {
    const ObjectId a = object(obj);
    const MorphismId id = morphism(m);
    if (d->src[id] != a || d->tgt[id] != a)
      throw Error(ErrorCode::InvalidCategory, "identity '" + m + "' is not an endomorphism of '" + obj + "'");
    d->identities[a] = id;
  }
  for (int a = 0; a < n; ++a)
    if (d->identities[a] < 0) throw Error(ErrorCode::InvalidCategory, "object '" + d->object_names[a] + "' has no identity");

  for (const auto& c : tables.compose) {
    const MorphismId g = morphism(c.outer), f = morphism(c.inner), r = morphism(c.result);
    if (d->tgt[f] != d->src[g])
      throw Error(ErrorCode::InvalidCategory, "composite " + c.outer + "∘" + c.inner + " is not composable");
    if (d->src[r] != d->src[f] || d->tgt[r] != d->tgt[g])
      throw Error(ErrorCode::InvalidCategory, "composite " + c.outer + "∘" + c.inner + " has the wrong type");
    auto [it, inserted] = d->table.emplace(Data::key(g, f), r);
    if (!inserted && it->second != r)
      throw Error(ErrorCode::InvalidCategory, "composite " + c.outer + "∘" + c.inner + " defined twice");
  }
  // Composites with identities may be omitted from the file.
  for (MorphismId f = 0; f < static_cast<MorphismId>(d->names.size()); ++f) {
    d->table.emplace(Data::key(d->identities[d->tgt[f]], f), f);
    d->table.emplace(Data::key(f, d->identities[d->src[f]]), f);
  }
  const int m = static_cast<int>(d->names.size());
  for (MorphismId g = 0; g < m; ++g)
    for (MorphismId f = 0; f < m; ++f)
      if (d->tgt[f] == d->src[g] && !d->table.contains(Data::key(g, f)))
        throw Error(ErrorCode::InvalidCategory, "composite " + d->names[g] + "∘" + d->names[f] + " is missing");

  FiniteCategory c;
  c.data_ = std::move(d);
  return c;
}

int FiniteCategory::object_count() const { return data_ ? data_->n() : 0; }
int FiniteCategory::morphism_count() const { return data_ ? static_cast<int>(data_->src.size()) : 0; }
const std::string& FiniteCategory::object_name(ObjectId a) const { return data_->object_names[a]; }

std::optional<ObjectId> FiniteCategory::find_object(std::string_view name) const {
  if (!data_) return std::nullopt;
  auto it = data_->object_lookup.find(std::string(name));
  if (it == data_->object_lookup.end()) return std::nullopt;
  return it->second;
}

bool FiniteCategory::structure_backed() const { return data_ && data_->structure_backed && !opposite_; }
bool FiniteCategory::has_structure(ObjectId a) const { return data_->structures[a].has_value(); }
const Structure& FiniteCategory::structure(ObjectId a) const {
  if (!data_->structures[a]) throw Error(ErrorCode::MissingIsoData, "object '" + object_name(a) + "' has no structure");
  return *data_->structures[a];
}

std::span<const MorphismId> FiniteCategory::hom(ObjectId a, ObjectId b) const {
  return opposite_ ? data_->hom(b, a) : data_->hom(a, b);
}
ObjectId FiniteCategory::source(MorphismId m) const { return opposite_ ? data_->tgt[m] : data_->src[m]; }
ObjectId FiniteCategory::target(MorphismId m) const { return opposite_ ? data_->src[m] : data_->tgt[m]; }
MorphismId FiniteCategory::identity(ObjectId a) const { return data_->identities[a]; }
MorphismId FiniteCategory::compose(MorphismId outer, MorphismId inner) const {
  return opposite_ ? data_->compose(inner, outer) : data_->compose(outer, inner);
}
int FiniteCategory::index_in_hom(MorphismId m) const { return data_->hom_index[m]; }

std::string FiniteCategory::morphism_name(MorphismId m) const {
  std::string base;
  if (data_->structure_backed) {
    base = data_->object_names[data_->src[m]] + "->" + data_->object_names[data_->tgt[m]] + "[";
    const auto& map = data_->maps[m];
    for (std::size_t i = 0; i < map.size(); ++i) base += (i ? "," : "") + std::to_string(map[i]);
    base += "]";
  } else {
    base = data_->names[m];
  }
  return opposite_ ? base + "^op" : base;
}

std::optional<MorphismId> FiniteCategory::find_morphism(std::string_view name) const {
  if (!data_) return std::nullopt;
  std::string key(name);
  if (opposite_) {
    if (!key.ends_with("^op")) return std::nullopt;
    key.resize(key.size() - 3);
  }
  if (!data_->structure_backed) {
    auto it = data_->name_lookup.find(key);
    if (it == data_->name_lookup.end()) return std::nullopt;
    return it->second;
  }
  const auto arrow = key.find("->"), open = key.find('['), close = key.rfind(']');
  if (arrow == std::string::npos || open == std::string::npos || close != key.size() - 1 || open < arrow)
    return std::nullopt;
  auto a = find_object(key.substr(0, arrow));
  auto b = find_object(key.substr(arrow + 2, open - arrow - 2));
  if (!a || !b) return std::nullopt;
  ElementMap map;
  std::string digits = key.substr(open + 1, close - open - 1);
  std::size_t pos = 0;
  while (pos < digits.size()) {
    const auto comma = digits.find(',', pos);
    const auto token = digits.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      map.push_back(std::stoi(token));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return data_->by_map(*a, *b, map);
}

const ElementMap& FiniteCategory::morphism_map(MorphismId m) const {
  if (!structure_backed()) throw Error(ErrorCode::InvalidCategory, "category is not structure-backed");
  return data_->maps[m];
}

std::optional<MorphismId> FiniteCategory::find_by_map(ObjectId a, ObjectId b, std::span<const int> map) const {
  if (!structure_backed()) throw Error(ErrorCode::InvalidCategory, "category is not structure-backed");
  return data_->by_map(a, b, map);
}

std::optional<MorphismId> FiniteCategory::inverse(MorphismId m) const {
  const ObjectId a = source(m), b = target(m);
  for (MorphismId candidate : hom(b, a))
    if (compose(candidate, m) == identity(a) && compose(m, candidate) == identity(b)) return candidate;
  return std::nullopt;
}

std::vector<MorphismId> FiniteCategory::automorphisms(ObjectId a) const {
  std::vector<MorphismId> out;
  for (MorphismId m : hom(a, a))
    if (inverse(m)) out.push_back(m);
  return out;
}

FiniteCategory FiniteCategory::op() const {
  FiniteCategory c = *this;
  c.opposite_ = !opposite_;
  return c;
}

bool FiniteCategory::same_tables(const FiniteCategory& other) const {
  const int n = object_count();
  if (n != other.object_count() || morphism_count() != other.morphism_count()) return false;
  for (ObjectId a = 0; a < n; ++a) {
    if (object_name(a) != other.object_name(a) || identity(a) != other.identity(a)) return false;
    for (ObjectId b = 0; b < n; ++b) {
      auto h1 = hom(a, b), h2 = other.hom(a, b);
      if (!std::equal(h1.begin(), h1.end(), h2.begin(), h2.end())) return false;
    }
  }
  const int m = morphism_count();
  for (MorphismId f = 0; f < m; ++f) {
    if (source(f) != other.source(f) || target(f) != other.target(f)) return false;
    for (ObjectId c = 0; c < n; ++c)
      for (MorphismId g : hom(target(f), c))
        if (compose(g, f) != other.compose(g, f)) return false;
  }
  return true;
}

std::vector<ObjectId> canonical_order(const FiniteCategory& c) {
  std::vector<ObjectId> order(c.object_count());
  std::iota(order.begin(), order.end(), 0);
  if (!c.structure_backed()) return order;
  std::vector<Structure> canon;
  canon.reserve(order.size());
  for (ObjectId a : order) canon.push_back(canonical_form(c.structure(a)).structure);
  std::stable_sort(order.begin(), order.end(), [&](ObjectId x, ObjectId y) { return canon[x] < canon[y]; });
  return order;
}

namespace {

struct Budget {
  std::uint64_t left;
  bool spend(std::uint64_t n = 1) {
    if (left < n) {
      left = 0;
      return false;
    }
    left -= n;
    return true;
  }
};

std::optional<MorphismId> factor(const FiniteCategory& c, MorphismId through, ObjectId from, MorphismId goal) {
  // The unique x in hom(from, source(through)) with through . x = goal, if any.
  for (MorphismId x : c.hom(from, c.source(through)))
    if (c.compose(through, x) == goal) return x;
  return std::nullopt;
}

}  // namespace

Status locally_finite(const FiniteCategory& c, ObjectId f_obj, std::uint64_t budget_nodes) {
  Budget budget{budget_nodes};
  const int n = c.object_count();
  for (ObjectId a = 0; a < n; ++a) {
    for (ObjectId b = 0; b < n; ++b) {
      for (MorphismId e : c.hom(a, f_obj)) {
        for (MorphismId f : c.hom(b, f_obj)) {
          bool witnessed = false;
          for (ObjectId d = 0; d < n && !witnessed; ++d) {
            for (MorphismId r : c.hom(d, f_obj)) {
              if (!budget.spend()) return Status::Unknown;
              auto p = factor(c, r, a, e);
              auto q = p ? factor(c, r, b, f) : std::nullopt;
              if (!p || !q) continue;
              // Universality against every contender (H, r', p', q').
              bool universal = true;
              for (ObjectId h = 0; h < n && universal; ++h) {
                for (MorphismId r2 : c.hom(h, f_obj)) {
                  if (!budget.spend()) return Status::Unknown;
                  auto p2 = factor(c, r2, a, e);
                  auto q2 = p2 ? factor(c, r2, b, f) : std::nullopt;
                  if (!p2 || !q2) continue;
                  bool mediated = false;
                  for (MorphismId s : c.hom(d, h)) {
                    if (c.compose(s, *p) == *p2 && c.compose(s, *q) == *q2 && c.compose(r2, s) == r) {
                      mediated = true;
                      break;
                    }
                  }
                  if (!mediated) {
                    universal = false;
                    break;
                  }
                }
              }
              if (universal) {
                witnessed = true;
                break;
              }
            }
          }
          if (!witnessed) return Status::Fails;
        }
      }
    }
  }
  return Status::Holds;
}

AxiomReport check_axioms(const FiniteCategory& c, const AxiomOptions& options) {
  AxiomReport report;
  const int n = c.object_count();
  const int m = c.morphism_count();

  for (MorphismId f = 0; f < m; ++f) {
    if (c.compose(c.identity(c.target(f)), f) != f || c.compose(f, c.identity(c.source(f))) != f)
      report.identity_laws = false;
  }
  for (MorphismId f = 0; f < m && report.associativity; ++f) {
    for (ObjectId x = 0; x < n && report.associativity; ++x) {
      for (MorphismId g : c.hom(c.target(f), x)) {
        for (ObjectId y = 0; y < n && report.associativity; ++y) {
          for (MorphismId h : c.hom(x, y)) {
            if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f)) {
              report.associativity = false;
              report.associativity_failure = std::tuple{h, g, f};
              break;
            }
          }
        }
      }
    }
  }

  // Mono: f . g = f . h implies g = h. Epi: g . f = h . f implies g = h.
  for (MorphismId f = 0; f < m; ++f) {
    const ObjectId b = c.source(f), cc = c.target(f);
    if (report.all_mono) {
      for (ObjectId a = 0; a < n && report.all_mono; ++a) {
        std::map<MorphismId, MorphismId> seen;
        for (MorphismId g : c.hom(a, b)) {
          auto [it, fresh] = seen.emplace(c.compose(f, g), g);
          if (!fresh) {
            report.all_mono = false;
            report.mono_failure = std::tuple{f, it->second, g};
            break;
          }
        }
      }
    }
    if (report.all_epi) {
      for (ObjectId d = 0; d < n && report.all_epi; ++d) {
        std::map<MorphismId, MorphismId> seen;
        for (MorphismId g : c.hom(cc, d)) {
          auto [it, fresh] = seen.emplace(c.compose(g, f), g);
          if (!fresh) {
            report.all_epi = false;
            report.epi_failure = std::tuple{f, it->second, g};
            break;
          }
        }
      }
    }
  }

  report.below.resize(n);
  report.above.resize(n);
  for (ObjectId b = 0; b < n; ++b)
    for (ObjectId a = 0; a < n; ++a) {
      if (c.arrow(a, b)) report.below[b].push_back(a);
      if (c.arrow(b, a)) report.above[b].push_back(a);
    }

  for (ObjectId a = 0; a < n && (report.directed || report.dually_directed); ++a) {
    for (ObjectId b = a; b < n; ++b) {
      bool up = false, down = false;
      for (ObjectId x = 0; x < n; ++x) {
        up |= c.arrow(a, x) && c.arrow(b, x);
        down |= c.arrow(x, a) && c.arrow(x, b);
      }
      if (!up && report.directed) {
        report.directed = false;
        report.directed_failure = std::pair{a, b};
      }
      if (!down && report.dually_directed) {
        report.dually_directed = false;
        report.dually_directed_failure = std::pair{a, b};
      }
    }
  }

  if (options.check_local_finiteness) {
    report.locally_finite.resize(n);
    for (ObjectId f = 0; f < n; ++f) {
      report.locally_finite[f] = locally_finite(c, f, options.local_finiteness_budget);
      report.local_finiteness = report.local_finiteness && report.locally_finite[f];
    }
  } else {
    report.local_finiteness = Status::Unknown;
  }
  return report;
}

Skeletonization skeletonize(const FiniteCategory& c) {
  const int n = c.object_count();
  Skeletonization s;
  s.class_of.assign(n, -1);
  s.canon_iso.assign(n, -1);
  if (n == 0) return s;

  int with_structure = 0;
  for (ObjectId a = 0; a < n; ++a) with_structure += c.has_structure(a) ? 1 : 0;
  if (with_structure != 0 && with_structure != n)
    throw Error(ErrorCode::MissingIsoData, "only some objects carry structures");

  if (c.structure_backed()) {
    std::vector<CanonicalForm> canon;
    canon.reserve(n);
    for (ObjectId a = 0; a < n; ++a) canon.push_back(canonical_form(c.structure(a)));
    std::map<Structure, std::vector<ObjectId>> classes;
    for (ObjectId a = 0; a < n; ++a) classes[canon[a].structure].push_back(a);
    for (auto& [form, members] : classes) {
      const ObjectId rep = *std::min_element(members.begin(), members.end(), [&](ObjectId x, ObjectId y) {
        return c.structure(x) < c.structure(y) || (c.structure(x) == c.structure(y) && x < y);
      });
      const int cls = static_cast<int>(s.representatives.size());
      s.representatives.push_back(rep);
      const ElementMap back = invert_map(canon[rep].iso);
      for (ObjectId a : members) {
        s.class_of[a] = cls;
        auto eta = c.find_by_map(a, rep, compose_maps(back, canon[a].iso));
        if (!eta) throw Error(ErrorCode::InvalidCategory, "canonical isomorphism missing from hom-set");
        s.canon_iso[a] = *eta;
      }
    }
    return s;
  }

  // Table-backed (or opposite): isomorphism classes from invertible morphisms.
  for (ObjectId a = 0; a < n; ++a) {
    if (s.class_of[a] >= 0) continue;
    const int cls = static_cast<int>(s.representatives.size());
    s.representatives.push_back(a);
    for (ObjectId b = a; b < n; ++b) {
      if (s.class_of[b] >= 0) continue;
      for (MorphismId m : c.hom(b, a)) {
        if (c.inverse(m)) {
          s.class_of[b] = cls;
          s.canon_iso[b] = m;
          break;
        }
      }
    }
    s.canon_iso[a] = c.identity(a);
  }
  return s;
}

}  // namespace rw
