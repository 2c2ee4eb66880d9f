#include "rw/expansion.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "rw/error.hpp"

namespace rw {

namespace {

// pull[r][i] = position of e . h_i in hom(rep_r, target(e)), h_i the i-th arrow rep_r -> source(e).
using PullTable = std::vector<std::vector<int>>;

PullTable pull_table(const ExpansionContext& ctx, MorphismId e) {
  const auto& cat = ctx.category();
  PullTable t(ctx.rep_count());
  for (int r = 0; r < ctx.rep_count(); ++r)
    for (MorphismId h : cat.hom(ctx.representatives()[r], cat.source(e)))
      t[r].push_back(cat.index_in_hom(cat.compose(e, h)));
  return t;
}

ExpandedObject pull(const PullTable& t, ObjectId base, const ExpandedObject& x) {
  ExpandedObject out{base, std::vector<std::vector<int>>(t.size())};
  for (std::size_t r = 0; r < t.size(); ++r) {
    out.theta[r].reserve(t[r].size());
    for (int i : t[r]) out.theta[r].push_back(x.theta[r][i]);
  }
  return out;
}

std::string rel_name(int m, int j) { return "R_" + std::to_string(m) + "_" + std::to_string(j); }

}  // namespace

ExpansionContext::ExpansionContext(const FiniteCategory& cat, const std::map<ObjectId, int>& degrees)
    : cat_(&cat), skel_(skeletonize(cat)), degrees_(skel_.representatives.size(), 0) {
  for (const auto& [obj, t] : degrees) {
    if (obj < 0 || obj >= cat.object_count()) throw Error(ErrorCode::Usage, "degree for an unknown object");
    if (t < 1) throw Error(ErrorCode::Usage, "degrees must be at least 1");
    int& slot = degrees_[skel_.class_of[obj]];
    if (slot != 0 && slot != t)
      throw Error(ErrorCode::Usage, "isomorphic objects were given different degrees (" + cat.object_name(obj) + ")");
    slot = t;
  }
  for (int& t : degrees_)
    if (t == 0) t = 1;
}

std::optional<std::uint64_t> fiber_size(const ExpansionContext& ctx, ObjectId c) {
  const auto& cat = ctx.category();
  std::uint64_t n = 1;
  for (int r = 0; r < ctx.rep_count(); ++r) {
    const auto t = static_cast<std::uint64_t>(ctx.degree(r));
    for (std::size_t i = 0; i < cat.hom(ctx.representatives()[r], c).size(); ++i) {
      if (n > (std::uint64_t{1} << 63) / t) return std::nullopt;
      n *= t;
    }
  }
  return n;
}

std::vector<ExpandedObject> enumerate_expansions(const ExpansionContext& ctx, ObjectId c, std::uint64_t limit) {
  const auto count = fiber_size(ctx, c);
  if (!count || *count > limit)
    throw Error(ErrorCode::Overflow, "the fiber of " + ctx.category().object_name(c) + " has more than " +
                                         std::to_string(limit) + " expansions");
  const auto& cat = ctx.category();
  ExpandedObject x{c, {}};
  for (int r = 0; r < ctx.rep_count(); ++r) x.theta.emplace_back(cat.hom(ctx.representatives()[r], c).size(), 0);

  std::vector<ExpandedObject> out;
  out.reserve(*count);
  while (true) {
    out.push_back(x);
    // Odometer with the last position fastest gives lexicographic order.
    int r = ctx.rep_count() - 1;
    for (; r >= 0; --r) {
      auto& row = x.theta[r];
      int i = static_cast<int>(row.size()) - 1;
      for (; i >= 0; --i) {
        if (++row[i] < ctx.degree(r)) break;
        row[i] = 0;
      }
      if (i >= 0) break;
    }
    if (r < 0) break;
  }
  return out;
}

ExpandedCatalog expand_catalog(const ExpansionContext& ctx, std::uint64_t limit) {
  ExpandedCatalog out;
  for (ObjectId c = 0; c < ctx.category().object_count(); ++c) out.push_back(enumerate_expansions(ctx, c, limit));
  return out;
}

void validate_expanded(const ExpansionContext& ctx, const ExpandedObject& x) {
  const auto& cat = ctx.category();
  if (x.base < 0 || x.base >= cat.object_count()) throw Error(ErrorCode::InvalidStructure, "unknown base object");
  if (static_cast<int>(x.theta.size()) != ctx.rep_count())
    throw Error(ErrorCode::InvalidStructure, "theta needs one coloring per representative");
  for (int r = 0; r < ctx.rep_count(); ++r) {
    if (x.theta[r].size() != cat.hom(ctx.representatives()[r], x.base).size())
      throw Error(ErrorCode::InvalidStructure, "coloring of the wrong length for " +
                                                   cat.object_name(ctx.representatives()[r]));
    for (int v : x.theta[r])
      if (v < 0 || v >= ctx.degree(r)) throw Error(ErrorCode::InvalidStructure, "color outside the palette");
  }
}

MorphismVerdict expansion_morphism_check(const ExpansionContext& ctx, MorphismId f, const ExpandedObject& c_star,
                                         const ExpandedObject& d_star) {
  const auto& cat = ctx.category();
  if (cat.source(f) != c_star.base || cat.target(f) != d_star.base)
    throw Error(ErrorCode::Usage, "morphism does not match the expanded objects");
  MorphismVerdict v;
  const auto t = pull_table(ctx, f);
  for (int r = 0; r < ctx.rep_count() && !v.offending; ++r)
    for (std::size_t i = 0; i < t[r].size(); ++i)
      if (d_star.theta[r][t[r][i]] != c_star.theta[r][i]) {
        v.status = Status::Fails;
        v.offending = {r, cat.hom(ctx.representatives()[r], c_star.base)[i]};
        break;
      }
  return v;
}

bool is_expanded_morphism(const ExpansionContext& ctx, MorphismId f, const ExpandedObject& c_star,
                          const ExpandedObject& d_star) {
  return expansion_morphism_check(ctx, f, c_star, d_star).status == Status::Holds;
}

ExpandedObject restriction(const ExpansionContext& ctx, const ExpandedObject& b_star, MorphismId e) {
  if (ctx.category().target(e) != b_star.base) throw Error(ErrorCode::Usage, "restriction along an arrow into another object");
  return pull(pull_table(ctx, e), ctx.category().source(e), b_star);
}

ExpandedObject logical_action(const ExpansionContext& ctx, const ExpandedObject& f_star, MorphismId g) {
  const auto& cat = ctx.category();
  if (cat.source(g) != f_star.base || cat.target(g) != f_star.base || !cat.inverse(g))
    throw Error(ErrorCode::Usage, "the logical action needs an automorphism of the base");
  return restriction(ctx, f_star, g);
}

ExpandedCatalog transport_expansion(const ExpansionContext& ctx,
                                    const std::vector<std::vector<ExpandedObject>>& rep_fibers) {
  const auto& cat = ctx.category();
  const auto& skel = ctx.skeleton();
  if (static_cast<int>(rep_fibers.size()) != ctx.rep_count())
    throw Error(ErrorCode::Usage, "expected one fiber per representative");
  ExpandedCatalog out(cat.object_count());
  for (ObjectId c = 0; c < cat.object_count(); ++c) {
    const MorphismId eta = skel.canon_iso[c];
    const auto t = pull_table(ctx, eta);
    for (const auto& x : rep_fibers[skel.class_of[c]]) {
      if (x.base != skel.representative_of(c)) throw Error(ErrorCode::Usage, "fiber entry over the wrong object");
      out[c].push_back(pull(t, c, x));
    }
  }
  return out;
}

ForgetfulReport check_forgetful(const ExpansionContext& ctx, const ExpandedCatalog& fibers, bool record_witnesses) {
  const auto& cat = ctx.category();
  const int n = cat.object_count();
  if (static_cast<int>(fibers.size()) != n) throw Error(ErrorCode::Usage, "expected one fiber per object");
  ForgetfulReport rep;

  std::vector<std::map<ExpandedObject, int>> index(n);
  for (ObjectId c = 0; c < n; ++c) {
    for (int i = 0; i < static_cast<int>(fibers[c].size()); ++i) {
      const auto& x = fibers[c][i];
      if (x.base != c) throw Error(ErrorCode::Usage, "fiber entry over the wrong object");
      validate_expanded(ctx, x);
      if (!index[c].emplace(x, i).second) rep.precompact = Status::Fails;
    }
    if (fibers[c].empty() && !rep.empty_fiber) {
      rep.surjective = Status::Fails;
      rep.empty_fiber = c;
    }
    const auto formula = fiber_size(ctx, c);
    rep.fiber_counts.emplace_back(fibers[c].size(), formula.value_or(0));
    rep.counts_match &= formula && *formula == fibers[c].size();
  }

  // Arrows of C* are arrows of C, so U is injective on hom-sets as long as the
  // pullback tables respect identities and composition.
  std::vector<PullTable> tables(cat.morphism_count());
  for (MorphismId m = 0; m < cat.morphism_count(); ++m) tables[m] = pull_table(ctx, m);
  for (ObjectId a = 0; a < n && !rep.injective_failure; ++a) {
    const auto& t = tables[cat.identity(a)];
    for (int r = 0; r < ctx.rep_count(); ++r)
      for (std::size_t i = 0; i < t[r].size(); ++i)
        if (t[r][i] != static_cast<int>(i)) rep.injective_failure = "identity of " + cat.object_name(a) + " recolors";
  }
  for (MorphismId e = 0; e < cat.morphism_count() && !rep.injective_failure; ++e)
    for (ObjectId x = 0; x < n && !rep.injective_failure; ++x)
      for (MorphismId f : cat.hom(x, cat.source(e))) {
        const auto& te = tables[e];
        const auto& tf = tables[f];
        const auto& tef = tables[cat.compose(e, f)];
        bool ok = true;
        for (int r = 0; r < ctx.rep_count() && ok; ++r)
          for (std::size_t i = 0; i < tf[r].size() && ok; ++i) ok = tef[r][i] == te[r][tf[r][i]];
        if (!ok) {
          rep.injective_failure = "restriction along " + cat.morphism_name(cat.compose(e, f)) +
                                  " differs from the iterated one";
          break;
        }
      }
  if (rep.injective_failure) rep.injective_on_homs = Status::Fails;

  for (MorphismId e = 0; e < cat.morphism_count(); ++e) {
    const ObjectId a = cat.source(e);
    const ObjectId b = cat.target(e);
    std::vector<int> hit(fibers[a].size(), -1);
    for (int j = 0; j < static_cast<int>(fibers[b].size()); ++j) {
      const auto r = pull(tables[e], a, fibers[b][j]);
      ++rep.restrictions_checked;
      const auto it = index[a].find(r);
      if (it == index[a].end()) {
        // The unique A* with e: A* -> B* is missing from the fiber.
        if (!rep.restriction_failure) rep.restriction_failure = {{j, e}};
        rep.unique_restrictions = Status::Fails;
        continue;
      }
      if (hit[it->second] < 0) hit[it->second] = j;
    }
    for (int i = 0; i < static_cast<int>(fibers[a].size()); ++i) {
      ++rep.reasonable_checked;
      if (hit[i] < 0) {
        rep.reasonable = Status::Fails;
        if (!rep.reasonable_failure) rep.reasonable_failure = {{i, e}};
      } else if (record_witnesses) {
        rep.reasonable_witnesses.push_back({i, e, hit[i]});
      }
    }
  }
  // Duplicates make the restriction non-unique as well.
  if (rep.precompact == Status::Fails) rep.unique_restrictions = Status::Fails;
  return rep;
}

Signature expanded_signature(const ExpansionContext& ctx) {
  const auto& cat = ctx.category();
  if (!cat.structure_backed()) throw Error(ErrorCode::Usage, "rendering needs a structure-backed category");
  const auto& base = cat.structure(ctx.representatives().front()).signature();
  auto rels = base.relations();
  for (int m = 0; m < ctx.rep_count(); ++m)
    for (int j = 1; j <= ctx.degree(m); ++j) {
      const auto name = rel_name(m, j);
      if (base.relation_index(name)) throw Error(ErrorCode::SignatureMismatch, "'" + name + "' is already in the signature");
      rels.push_back({name, cat.structure(ctx.representatives()[m]).size()});
    }
  return Signature(rels, base.constants());
}

Structure render(const ExpansionContext& ctx, const ExpandedObject& x) {
  const auto& cat = ctx.category();
  validate_expanded(ctx, x);
  const Structure& s = cat.structure(x.base);
  std::vector<std::vector<Tuple>> rels;
  for (int r = 0; r < s.relation_count(); ++r) rels.push_back(s.relation(r));
  for (int m = 0; m < ctx.rep_count(); ++m) {
    std::vector<std::vector<Tuple>> by_color(ctx.degree(m));
    const auto hom = cat.hom(ctx.representatives()[m], x.base);
    for (std::size_t i = 0; i < hom.size(); ++i) by_color[x.theta[m][i]].push_back(cat.morphism_map(hom[i]));
    for (auto& tuples : by_color) rels.push_back(std::move(tuples));
  }
  return Structure(expanded_signature(ctx), s.size(), std::move(rels), s.constants());
}

ExpandedObject unrender(const ExpansionContext& ctx, ObjectId base, const Structure& s) {
  const auto& cat = ctx.category();
  const auto sig = expanded_signature(ctx);
  if (!(s.signature() == sig)) throw Error(ErrorCode::SignatureMismatch, "not over the expanded signature");
  const Structure& b = cat.structure(base);
  const int nbase = static_cast<int>(b.signature().relations().size());
  std::vector<std::vector<Tuple>> reduct;
  for (int r = 0; r < nbase; ++r) reduct.push_back(s.relation(r));
  if (!(Structure(b.signature(), s.size(), reduct, s.constants()) == b))
    throw Error(ErrorCode::InvalidStructure, "the reduct is not the base object");

  ExpandedObject x{base, {}};
  int rel = nbase;
  for (int m = 0; m < ctx.rep_count(); ++m) {
    const ObjectId a = ctx.representatives()[m];
    std::vector<int> colors(cat.hom(a, base).size(), -1);
    for (int j = 0; j < ctx.degree(m); ++j, ++rel)
      for (const auto& tuple : s.relation(rel)) {
        const auto e = cat.find_by_map(a, base, tuple);
        if (!e) throw Error(ErrorCode::InvalidStructure, "a tuple of " + rel_name(m, j + 1) + " is not an arrow");
        int& slot = colors[cat.index_in_hom(*e)];
        if (slot >= 0) throw Error(ErrorCode::InvalidStructure, "the relations R_" + std::to_string(m) + "_j overlap");
        slot = j;
      }
    if (std::find(colors.begin(), colors.end(), -1) != colors.end())
      throw Error(ErrorCode::InvalidStructure, "an arrow from " + cat.object_name(a) + " is uncolored");
    x.theta.push_back(std::move(colors));
  }
  return x;
}

std::vector<ObjectId> filtered_reps(const ExpansionContext& ctx, ObjectFilter catalog) {
  if (!catalog) return ctx.representatives();
  std::vector<bool> keep(ctx.rep_count(), false);
  for (ObjectId x : *catalog) keep.at(ctx.skeleton().class_of.at(x)) = true;
  std::vector<ObjectId> out;
  for (int r = 0; r < ctx.rep_count(); ++r)
    if (keep[r]) out.push_back(ctx.representatives()[r]);
  return out;
}

ExpandedCatalog age_fibers(const ExpansionContext& ctx, const ExpandedObject& f_star, ObjectFilter catalog) {
  const auto& cat = ctx.category();
  std::vector<std::set<ExpandedObject>> sets(cat.object_count());
  for (ObjectId a : filtered_reps(ctx, catalog))
    for (MorphismId e : cat.hom(a, f_star.base)) sets[a].insert(restriction(ctx, f_star, e));
  ExpandedCatalog out;
  for (auto& s : sets) out.emplace_back(s.begin(), s.end());
  return out;
}

namespace {

std::vector<AgeEntry> age_with(const ExpansionContext& ctx, const ExpandedObject& f_star, ObjectFilter catalog,
                               std::map<ExpandedObject, Structure>& cache) {
  std::map<Structure, ExpandedObject> found;
  for (const auto& fiber : age_fibers(ctx, f_star, catalog))
    for (const auto& x : fiber) {
      auto it = cache.find(x);
      if (it == cache.end()) it = cache.emplace(x, canonical_form(render(ctx, x)).structure).first;
      found.emplace(it->second, x);
    }
  std::vector<AgeEntry> out;
  for (auto& [k, x] : found) out.push_back({k, x});
  return out;
}

}  // namespace

std::vector<AgeEntry> age(const ExpansionContext& ctx, const ExpandedObject& f_star, ObjectFilter catalog) {
  std::map<ExpandedObject, Structure> cache;
  return age_with(ctx, f_star, catalog, cache);
}

OrbitAgeReport orbit_age_analysis(const ExpansionContext& ctx, ObjectId f, ObjectFilter catalog,
                                  std::uint64_t limit) {
  const auto& cat = ctx.category();
  OrbitAgeReport rep;
  rep.f = f;
  if (catalog) {
    rep.catalog = filtered_reps(ctx, catalog);
  } else {
    for (int r = 0; r < ctx.rep_count(); ++r)
      if (r != ctx.skeleton().class_of[f]) rep.catalog.push_back(ctx.representatives()[r]);
  }
  rep.expansions = enumerate_expansions(ctx, f, limit);
  const int n = static_cast<int>(rep.expansions.size());
  std::map<ExpandedObject, int> index;
  for (int i = 0; i < n; ++i) index.emplace(rep.expansions[i], i);

  std::vector<int> orbit_of(n, -1);
  const auto aut = cat.automorphisms(f);
  std::vector<PullTable> tables;
  for (MorphismId g : aut) tables.push_back(pull_table(ctx, g));
  for (int i = 0; i < n; ++i) {
    if (orbit_of[i] >= 0) continue;
    std::vector<int> members;
    for (const auto& t : tables) {
      const int j = index.at(pull(t, f, rep.expansions[i]));
      if (orbit_of[j] < 0) {
        orbit_of[j] = static_cast<int>(rep.orbits.size());
        members.push_back(j);
      }
    }
    std::sort(members.begin(), members.end());
    rep.orbits.push_back(std::move(members));
  }

  std::map<ExpandedObject, Structure> cache;
  std::map<std::vector<Structure>, int> age_index;
  for (const auto& x : rep.expansions) {
    std::vector<Structure> keys;
    for (auto& entry : age_with(ctx, x, rep.catalog, cache)) keys.push_back(std::move(entry.key));
    const auto [it, fresh] = age_index.emplace(keys, static_cast<int>(rep.ages.size()));
    if (fresh) rep.ages.push_back(std::move(keys));
    rep.age_of.push_back(it->second);
  }
  for (const auto& orbit : rep.orbits)
    for (int i : orbit)
      if (rep.age_of[i] != rep.age_of[orbit.front()]) {
        rep.orbit_invariance = Status::Fails;
        if (!rep.invariance_failure) rep.invariance_failure = {{orbit.front(), i}};
      }

  auto subset = [&](int a, int b) {
    return std::includes(rep.ages[b].begin(), rep.ages[b].end(), rep.ages[a].begin(), rep.ages[a].end());
  };
  for (int a = 0; a < static_cast<int>(rep.ages.size()); ++a) {
    bool minimal = true;
    for (int b = 0; b < static_cast<int>(rep.ages.size()) && minimal; ++b)
      if (b != a && subset(b, a)) minimal = false;
    if (minimal) rep.minimal_ages.push_back(a);
  }
  for (int i = 0; i < n; ++i)
    if (std::find(rep.minimal_ages.begin(), rep.minimal_ages.end(), rep.age_of[i]) != rep.minimal_ages.end()) {
      rep.selected = i;
      break;
    }
  return rep;
}

ExpansionPropertyReport expansion_property_check(const ExpansionContext& ctx, const ExpandedCatalog& designated,
                                                 int max_candidates) {
  const auto& cat = ctx.category();
  if (static_cast<int>(designated.size()) != cat.object_count())
    throw Error(ErrorCode::Usage, "expected one designated fiber per object");
  std::vector<ObjectId> objects;
  for (ObjectId x : canonical_order(cat))
    if (!designated[x].empty()) objects.push_back(x);
  const int reach = max_candidates > 0 ? std::min<int>(max_candidates, objects.size()) : objects.size();
  const bool truncated = reach < static_cast<int>(objects.size());

  // x* -> y* through some arrow of the base.
  auto maps_into = [&](const ExpandedObject& x, const ExpandedObject& y) {
    for (MorphismId e : cat.hom(x.base, y.base))
      if (is_expanded_morphism(ctx, e, x, y)) return true;
    return false;
  };
  auto absorbs = [&](std::span<const ExpandedObject> sources, ObjectId b) {
    for (const auto& y : designated[b])
      for (const auto& x : sources)
        if (!maps_into(x, y)) return false;
    return true;
  };

  ExpansionPropertyReport rep;
  for (ObjectId a : objects) {
    EpEntry entry{a, std::nullopt, 0};
    for (int i = 0; i < reach && !entry.b; ++i) {
      ++entry.candidates_tried;
      if (absorbs(designated[a], objects[i])) entry.b = objects[i];
    }
    if (!entry.b) rep.direct = rep.direct && (truncated ? Status::Unknown : Status::Fails);
    rep.entries.push_back(entry);
  }
  for (ObjectId d : objects)
    for (int k = 0; k < static_cast<int>(designated[d].size()); ++k) {
      EpAltEntry entry{d, k, std::nullopt};
      for (int i = 0; i < reach && !entry.b; ++i)
        if (absorbs(std::span(&designated[d][k], 1), objects[i])) entry.b = objects[i];
      if (!entry.b) rep.alternative = rep.alternative && (truncated ? Status::Unknown : Status::Fails);
      rep.alt_entries.push_back(entry);
    }
  rep.disagreement = rep.direct != rep.alternative;
  return rep;
}

}  // namespace rw
