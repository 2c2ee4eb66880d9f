#include "rw/sequences.hpp"

#include <algorithm>
#include <map>

#include "rw/error.hpp"

namespace rw {

MorphismId TruncatedSequence::bond(const FiniteCategory& cat, int n, int m) const {
  if (n < 0 || m >= length() || n > m) throw Error(ErrorCode::ShapeMismatch, "bonding index out of range");
  MorphismId out = cat.identity(objects[n]);
  for (int i = n; i < m; ++i) out = cat.compose(bonding[i], out);
  return out;
}

void validate_sequence(const FiniteCategory& cat, const TruncatedSequence& s) {
  if (s.objects.empty()) throw Error(ErrorCode::ShapeMismatch, "a sequence needs at least one object");
  if (s.bonding.size() + 1 != s.objects.size())
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(s.objects.size() - 1) + " bonding arrows");
  for (std::size_t n = 0; n < s.bonding.size(); ++n)
    if (cat.source(s.bonding[n]) != s.objects[n] || cat.target(s.bonding[n]) != s.objects[n + 1])
      throw Error(ErrorCode::ShapeMismatch, "bonding arrow " + std::to_string(n) + " has the wrong ends");
}

void validate_transformation(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                             const Transformation& t) {
  const int nx = x.length();
  const int ny = y.length();
  if (static_cast<int>(t.phi.size()) != nx || static_cast<int>(t.components.size()) != nx)
    throw Error(ErrorCode::InvalidTransformation, "phi and the components must have one entry per level");
  for (int n = 0; n < nx; ++n) {
    if (t.phi[n] < 0 || t.phi[n] >= ny) throw Error(ErrorCode::InvalidTransformation, "phi leaves the target");
    if (n > 0 && t.phi[n] < t.phi[n - 1]) throw Error(ErrorCode::InvalidTransformation, "phi must be nondecreasing");
    const MorphismId f = t.components[n];
    if (cat.source(f) != x.objects[n] || cat.target(f) != y.objects[t.phi[n]])
      throw Error(ErrorCode::InvalidTransformation, "component " + std::to_string(n) + " has the wrong ends");
  }
  if (t.phi.back() != ny - 1)
    throw Error(ErrorCode::InvalidTransformation, "phi must reach the last level of the target");
  for (int n = 0; n + 1 < nx; ++n) {
    const MorphismId left = cat.compose(t.components[n + 1], x.bonding[n]);
    const MorphismId right = cat.compose(y.bond(cat, t.phi[n], t.phi[n + 1]), t.components[n]);
    if (left != right)
      throw Error(ErrorCode::InvalidTransformation, "naturality fails at level " + std::to_string(n));
  }
}

Transformation identity_transformation(const FiniteCategory& cat, const TruncatedSequence& x) {
  Transformation t;
  for (int n = 0; n < x.length(); ++n) {
    t.phi.push_back(n);
    t.components.push_back(cat.identity(x.objects[n]));
  }
  return t;
}

Transformation compose(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                       const TruncatedSequence& z, const Transformation& t2, const Transformation& t1) {
  if (static_cast<int>(t1.phi.size()) != x.length() || static_cast<int>(t2.phi.size()) > y.length())
    throw Error(ErrorCode::ShapeMismatch, "transformations do not match their sequences");
  Transformation out;
  for (int n = 0; n < x.length(); ++n) {
    const int mid = t1.phi[n];
    if (mid < 0 || mid >= static_cast<int>(t2.phi.size()))
      throw Error(ErrorCode::TruncationOverflow, "phi_1(" + std::to_string(n) + ") is beyond the second truncation");
    out.phi.push_back(t2.phi[mid]);
    out.components.push_back(cat.compose(t2.components[mid], t1.components[n]));
  }
  validate_transformation(cat, x, z, out);
  return out;
}

EquivVerdict equiv_check(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                         const Transformation& t1, const Transformation& t2, int bound) {
  if (t1.phi.size() != t2.phi.size() || static_cast<int>(t1.phi.size()) != x.length())
    throw Error(ErrorCode::ShapeMismatch, "transformations have different sources");
  const int last = y.length() - 1;
  const int top = std::min(bound, last);
  EquivVerdict v;
  for (int n = 0; n < x.length(); ++n) {
    const int phi = t1.phi[n];
    const int psi = t2.phi[n];
    int found = -1;
    for (int m = std::max(phi, psi); m <= top && found < 0; ++m)
      if (cat.compose(y.bond(cat, phi, m), t1.components[n]) == cat.compose(y.bond(cat, psi, m), t2.components[n]))
        found = m;
    if (found >= 0) {
      v.witness_level.push_back(found);
      continue;
    }
    v.witness_level.push_back(-1);
    if (!v.offending) v.offending = n;
    // Separated at the last level: no longer truncation can equalize them
    // unless the bonding arrows stop being mono.
    const bool final_checked = bound >= last && std::max(phi, psi) <= last;
    v.status = v.status && (final_checked ? Status::Fails : Status::Unknown);
  }
  return v;
}

TruncatedSequence embed_J(const FiniteCategory& cat, ObjectId a, int length) {
  TruncatedSequence s;
  s.objects.assign(length, a);
  s.bonding.assign(std::max(0, length - 1), cat.identity(a));
  return s;
}

Transformation lift_J(const FiniteCategory&, MorphismId f, int length) {
  Transformation t;
  for (int n = 0; n < length; ++n) {
    t.phi.push_back(n);
    t.components.push_back(f);
  }
  return t;
}

std::optional<MorphismId> factor_through(const FiniteCategory& cat, MorphismId t, MorphismId y) {
  for (MorphismId g : cat.hom(cat.source(t), cat.source(y)))
    if (cat.compose(y, g) == t) return g;
  return std::nullopt;
}

Colimit colimit(const FiniteCategory& cat, const TruncatedSequence& s) {
  validate_sequence(cat, s);
  if (!cat.structure_backed()) throw Error(ErrorCode::Usage, "colimits need a structure-backed category");
  const int last = s.length() - 1;
  const Structure& top = cat.structure(s.objects[last]);

  std::vector<std::pair<int, int>> name_of(top.size(), {-1, -1});
  for (int n = 0; n <= last; ++n) {
    const auto& map = cat.morphism_map(s.bond(cat, n, last));
    for (int i = 0; i < static_cast<int>(map.size()); ++i)
      if (name_of[map[i]].first < 0) name_of[map[i]] = {n, i};
  }
  std::vector<int> by_name(top.size());
  for (int y = 0; y < top.size(); ++y) by_name[y] = y;
  std::sort(by_name.begin(), by_name.end(), [&](int a, int b) { return name_of[a] < name_of[b]; });
  ElementMap relabel(top.size());
  Colimit out;
  for (int idx = 0; idx < top.size(); ++idx) {
    relabel[by_name[idx]] = idx;
    out.names.push_back(name_of[by_name[idx]]);
  }
  out.structure = top.relabeled(relabel);
  for (int n = 0; n <= last; ++n) out.cocone.push_back(compose_maps(relabel, cat.morphism_map(s.bond(cat, n, last))));
  return out;
}

std::optional<ElementMap> mediating_map(const FiniteCategory& cat, const TruncatedSequence& s, const Colimit& colim,
                                        const Structure& target, std::span<const ElementMap> d) {
  const int last = s.length() - 1;
  if (static_cast<int>(d.size()) != s.length()) return std::nullopt;
  for (int n = 0; n <= last; ++n) {
    if (!is_embedding(cat.structure(s.objects[n]), target, d[n])) return std::nullopt;
    if (n < last && compose_maps(d[n + 1], cat.morphism_map(s.bonding[n])) != d[n]) return std::nullopt;
  }
  // c_{N-1} is a bijection onto the colimit.
  ElementMap med = compose_maps(d[last], invert_map(colim.cocone[last]));
  if (!is_embedding(colim.structure, target, med)) return std::nullopt;
  for (int n = 0; n <= last; ++n)
    if (compose_maps(med, colim.cocone[n]) != d[n]) return std::nullopt;
  return med;
}

Status mono_test(const FiniteCategory& cat, const TruncatedSequence& x, const TruncatedSequence& y,
                 const TruncatedSequence& z, const Transformation& f, const Transformation& g, const Transformation& h,
                 int bound) {
  const auto fg = compose(cat, x, y, z, f, g);
  const auto fh = compose(cat, x, y, z, f, h);
  if (equiv_check(cat, x, z, fg, fh, bound).status != Status::Holds) return Status::Holds;
  const Status gh = equiv_check(cat, x, y, g, h, bound).status;
  return gh == Status::Holds ? Status::Holds : gh;
}

WeakFraisseReport weak_fraisse_check(const FiniteCategory& cat, const TruncatedSequence& w,
                                     std::span<const ObjectId> catalog, int m_max, int k_max) {
  validate_sequence(cat, w);
  const int last = w.length() - 1;
  WeakFraisseReport r;
  r.m_max = m_max;
  r.k_max = k_max;

  for (ObjectId c : catalog) {
    std::optional<int> level;
    for (int n = 0; n <= last && !level; ++n)
      if (cat.arrow(c, w.objects[n])) level = n;
    if (!level) r.cofinal = Status::Fails;
    r.entry_level.push_back({c, level});
  }

  const int m_top = std::min(m_max, last);
  const int k_top = std::min(k_max, last);
  for (int n = 0; n <= last; ++n) {
    FraisseLevel level;
    level.n = n;
    for (int m = n; m <= m_top && !level.m; ++m) {
      const MorphismId wnm = w.bond(cat, n, m);
      std::vector<FraisseWitness> found;
      bool all = true;
      for (ObjectId c : catalog) {
        for (MorphismId f : cat.hom(w.objects[m], c)) {
          const MorphismId fw = cat.compose(f, wnm);
          std::optional<FraisseWitness> hit;
          for (int k = m; k <= k_top && !hit; ++k) {
            const MorphismId wnk = w.bond(cat, n, k);
            for (MorphismId g : cat.hom(c, w.objects[k]))
              if (cat.compose(g, fw) == wnk) {
                hit = FraisseWitness{c, f, k, g};
                break;
              }
          }
          if (!hit) {
            all = false;
            break;
          }
          found.push_back(*hit);
        }
        if (!all) break;
      }
      if (all) {
        level.m = m;
        level.witnesses = std::move(found);
      }
    }
    if (!level.m) r.absorbing = Status::Unknown;
    r.levels.push_back(std::move(level));
  }
  r.status = r.cofinal == Status::Fails ? Status::Fails : r.absorbing;
  return r;
}

HomogeneityReport weak_homogeneity_check(const FiniteCategory& cat, ObjectId s, std::span<const ObjectId> catalog) {
  const auto aut = cat.automorphisms(s);
  HomogeneityReport r;
  for (ObjectId a : catalog) {
    for (MorphismId f : cat.hom(a, s)) {
      std::optional<HomogeneityWitness> found;
      for (ObjectId b : catalog) {
        for (MorphismId e : cat.hom(a, b)) {
          for (MorphismId i : cat.hom(b, s)) {
            const MorphismId ie = cat.compose(i, e);
            if (ie != f) continue;
            HomogeneityWitness wit{a, f, b, e, i, {}};
            bool ok = true;
            for (MorphismId j : cat.hom(b, s)) {
              const MorphismId je = cat.compose(j, e);
              const auto h = std::find_if(aut.begin(), aut.end(), [&](MorphismId x) { return cat.compose(x, je) == ie; });
              if (h == aut.end()) {
                ok = false;
                break;
              }
              wit.j_to_h.push_back({j, *h});
            }
            if (ok) {
              found = std::move(wit);
              break;
            }
          }
          if (found) break;
        }
        if (found) break;
      }
      if (!found) {
        r.status = Status::Fails;
        if (!r.failure) r.failure = {{a, f}};
        continue;
      }
      r.witnesses.push_back(std::move(*found));
    }
  }
  return r;
}

UltrahomogeneityReport ultrahomogeneity_check(const FiniteCategory& cat, ObjectId f,
                                              std::span<const ObjectId> catalog) {
  const auto aut = cat.automorphisms(f);
  UltrahomogeneityReport r;
  for (ObjectId a : catalog) {
    const auto hom = cat.hom(a, f);
    for (MorphismId e1 : hom)
      for (MorphismId e2 : hom) {
        const auto g = std::find_if(aut.begin(), aut.end(), [&](MorphismId x) { return cat.compose(x, e1) == e2; });
        if (g == aut.end()) {
          r.status = Status::Fails;
          if (!r.failure) r.failure = {{e1, e2}};
        } else {
          r.witnesses.emplace_back(e1, e2, *g);
        }
      }
  }
  return r;
}

}  // namespace rw
