#include "rw/amalgam.hpp"

#include <algorithm>
#include <functional>

#include "rw/error.hpp"

namespace rw {

namespace {

std::optional<AmalgamWitness> find_amalgam_in(const FiniteCategory& cat, std::span<const ObjectId> order, MorphismId g,
                                              MorphismId h) {
  const ObjectId b = cat.target(g);
  const ObjectId c = cat.target(h);
  for (ObjectId d : order) {
    const auto hom_cd = cat.hom(c, d);
    if (hom_cd.empty()) continue;
    for (MorphismId r : cat.hom(b, d)) {
      const MorphismId rg = cat.compose(r, g);
      for (MorphismId s : hom_cd)
        if (cat.compose(s, h) == rg) return AmalgamWitness{d, r, s};
    }
  }
  return std::nullopt;
}

std::vector<ObjectId> domain_order(const FiniteCategory& cat, Domain domain) {
  auto order = canonical_order(cat);
  if (!domain) return order;
  std::vector<bool> member(cat.object_count(), false);
  for (ObjectId x : *domain) member.at(x) = true;
  std::erase_if(order, [&](ObjectId x) { return !member[x]; });
  return order;
}

// Arrows out of `a` with targets in the given order.
std::vector<MorphismId> arrows_out(const FiniteCategory& cat, std::span<const ObjectId> order, ObjectId a) {
  std::vector<MorphismId> out;
  for (ObjectId b : order)
    for (MorphismId g : cat.hom(a, b)) out.push_back(g);
  return out;
}

}  // namespace

std::optional<AmalgamWitness> find_amalgam(const FiniteCategory& cat, MorphismId g, MorphismId h) {
  if (cat.source(g) != cat.source(h)) throw Error(ErrorCode::Usage, "amalgamated arrows must share their source");
  const auto order = canonical_order(cat);
  return find_amalgam_in(cat, order, g, h);
}

bool verify_amalgam(const FiniteCategory& cat, MorphismId g, MorphismId h, const AmalgamWitness& w) {
  if (cat.source(w.r) != cat.target(g) || cat.source(w.s) != cat.target(h)) return false;
  if (cat.target(w.r) != w.d || cat.target(w.s) != w.d) return false;
  return cat.compose(w.r, g) == cat.compose(w.s, h);
}

AmalgamationArrowVerdict is_amalgamation_arrow(const FiniteCategory& cat, MorphismId f, Domain domain,
                                               Execution exec) {
  const auto order = canonical_order(cat);
  const auto out_arrows = arrows_out(cat, domain_order(cat, domain), cat.target(f));
  const long n = static_cast<long>(out_arrows.size());
  std::vector<std::optional<AmalgamWitness>> found(static_cast<std::size_t>(n * n));

  auto solve = [&](long idx) {
    const MorphismId g = out_arrows[idx / n];
    const MorphismId h = out_arrows[idx % n];
    found[idx] = find_amalgam_in(cat, order, cat.compose(g, f), cat.compose(h, f));
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long idx = 0; idx < n * n; ++idx) solve(idx);
  } else {
    for (long idx = 0; idx < n * n; ++idx) solve(idx);
  }

  AmalgamationArrowVerdict v;
  v.f = f;
  for (long idx = 0; idx < n * n; ++idx) {
    const MorphismId g = out_arrows[idx / n];
    const MorphismId h = out_arrows[idx % n];
    if (!found[idx]) {
      v.status = Status::Fails;
      v.failure = {g, h};
      v.witnesses.clear();
      return v;
    }
    v.witnesses.push_back({g, h, *found[idx]});
  }
  return v;
}

WapReport wap_check(const FiniteCategory& cat, Domain domain, Execution exec) {
  const auto order = domain_order(cat, domain);
  WapReport report;
  for (ObjectId a : order) {
    WapEntry entry;
    entry.a = a;
    std::vector<MorphismId> candidates{cat.identity(a)};
    for (MorphismId f : arrows_out(cat, order, a))
      if (f != cat.identity(a)) candidates.push_back(f);
    for (MorphismId f : candidates) {
      ++entry.candidates_tried;
      auto v = is_amalgamation_arrow(cat, f, domain, exec);
      if (v.status == Status::Holds) {
        entry.arrow = std::move(v);
        break;
      }
    }
    if (!entry.arrow) report.status = Status::Fails;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

TwoOfKReport two_of_k_check(const FiniteCategory& cat, ObjectId a, int k, Domain domain) {
  if (k < 2) throw Error(ErrorCode::Usage, "k must be at least 2");
  const auto order = canonical_order(cat);
  const auto arrows = arrows_out(cat, domain_order(cat, domain), a);
  const int n = static_cast<int>(arrows.size());
  std::vector<std::vector<bool>> apart(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      apart[i][j] = apart[j][i] = !find_amalgam_in(cat, order, arrows[i], arrows[j]);

  TwoOfKReport report;
  report.k = k;
  report.morphisms = n;
  std::vector<int> clique;
  std::function<bool(int)> grow = [&](int from) {
    if (static_cast<int>(clique.size()) == k) return true;
    for (int v = from; v < n; ++v) {
      if (n - v < k - static_cast<int>(clique.size())) return false;
      if (!std::all_of(clique.begin(), clique.end(), [&](int u) { return apart[u][v]; })) continue;
      clique.push_back(v);
      if (grow(v + 1)) return true;
      clique.pop_back();
    }
    return false;
  };
  if (grow(0)) {
    report.status = Status::Fails;
    for (int v : clique) report.refutation.push_back(arrows[v]);
  }
  return report;
}

Claim1Transcript claim1_extract(const FiniteCategory& cat, ObjectId a, int k, ObjectId c, ObjectId d,
                                std::span<const MorphismId> g_list, std::span<const MorphismId> f_list,
                                const ArrowOptions& options) {
  if (k < 2) throw Error(ErrorCode::Usage, "k must be at least 2");
  if (static_cast<int>(g_list.size()) != k || static_cast<int>(f_list.size()) != k)
    throw Error(ErrorCode::Usage, "expected k arrows f_i and k arrows g_i");
  for (int i = 0; i < k; ++i) {
    if (cat.source(f_list[i]) != a) throw Error(ErrorCode::Usage, "f_i must start at A");
    if (cat.source(g_list[i]) != cat.target(f_list[i]) || cat.target(g_list[i]) != c)
      throw Error(ErrorCode::Usage, "g_i must map B_i to C");
  }
  const auto arrow = arrow_check(cat, d, c, a, k, k - 1, options);
  if (arrow.status == Status::Unknown)
    throw Error(ErrorCode::BudgetExceeded, "could not decide whether D -> (C)^A_{k,k-1}");
  if (arrow.status == Status::Fails)
    throw Error(ErrorCode::ArrowDoesNotHold, cat.object_name(d) + " -/-> (" + cat.object_name(c) + ")^" +
                                                 cat.object_name(a) + "_{" + std::to_string(k) + "," +
                                                 std::to_string(k - 1) + "}");

  auto factor = [&](int i, MorphismId h) -> std::optional<MorphismId> {
    for (MorphismId g : cat.hom(cat.target(f_list[i]), d))
      if (cat.compose(g, f_list[i]) == h) return g;
    return std::nullopt;
  };

  Claim1Transcript t;
  const auto hom_ad = cat.hom(a, d);
  t.chi = Coloring{{hom_ad.begin(), hom_ad.end()}, k, {}};
  for (MorphismId h : hom_ad) {
    int color = k - 1;
    for (int i = 0; i < k - 1; ++i)
      if (factor(i, h)) {
        color = i;
        break;
      }
    t.chi.values.push_back(color);
  }

  bool found_x = false;
  for (MorphismId x : cat.hom(c, d)) {
    std::vector<bool> seen(k, false);
    for (MorphismId e : cat.hom(a, c)) seen[t.chi.values[cat.index_in_hom(cat.compose(x, e))]] = true;
    const auto missing = std::find(seen.begin(), seen.end(), false);
    if (missing != seen.end()) {
      t.x = x;
      t.avoided = static_cast<int>(missing - seen.begin());
      found_x = true;
      break;
    }
  }
  if (!found_x) throw Error(ErrorCode::FactorSearchFailed, "no copy of C avoids a color");

  const int j = t.avoided;
  const MorphismId target = cat.compose(t.x, cat.compose(g_list[j], f_list[j]));
  t.color = t.chi.values[cat.index_in_hom(target)];
  if (t.color == j) throw Error(ErrorCode::FactorSearchFailed, "the avoided color occurs");
  const auto g = factor(t.color, target);
  if (!g) throw Error(ErrorCode::FactorSearchFailed, "no factorization through f_" + std::to_string(t.color));
  t.g = *g;
  t.amalgam = AmalgamWitness{d, t.g, cat.compose(t.x, g_list[j])};
  return t;
}

Claim1Transcript claim1_search(const FiniteCategory& cat, ObjectId a, std::span<const MorphismId> f_list,
                               const ArrowOptions& options) {
  const int k = static_cast<int>(f_list.size());
  const auto order = canonical_order(cat);
  for (ObjectId c : order) {
    bool receives_all = true;
    for (MorphismId f : f_list) receives_all &= cat.arrow(cat.target(f), c);
    if (!receives_all) continue;
    std::vector<MorphismId> g_list;
    for (MorphismId f : f_list) g_list.push_back(cat.hom(cat.target(f), c).front());
    const auto d = find_ramsey_witness(cat, order, c, a, k, k - 1, options);
    if (!d.witness) continue;
    return claim1_extract(cat, a, k, c, *d.witness, g_list, f_list, options);
  }
  throw Error(ErrorCode::ArrowDoesNotHold, "no C and D in the catalog satisfy the hypotheses");
}

FailureChain failure_chain(const FiniteCategory& cat, ObjectId a, int depth, Domain domain, Execution exec) {
  if (depth < 0) throw Error(ErrorCode::Usage, "depth must be non-negative");
  FailureChain chain;
  chain.depth = depth;
  MorphismId f = cat.identity(a);
  for (int i = 0; i < depth; ++i) {
    const auto v = is_amalgamation_arrow(cat, f, domain, exec);
    if (v.status == Status::Holds) {
      chain.reached_amalgamation_arrow = true;
      break;
    }
    const auto [g, h] = *v.failure;
    chain.steps.push_back({f, g, h});
    chain.arrows.push_back(cat.compose(g, f));
    f = cat.compose(h, f);
  }
  // f_n cannot amalgamate with any g_i . f_i either: it factors through h_i . f_i.
  if (!chain.steps.empty()) chain.arrows.push_back(f);
  return chain;
}

}  // namespace rw
