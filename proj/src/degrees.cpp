#include "rw/degrees.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "rw/error.hpp"

namespace rw {

namespace {

bool size_ok(const FiniteCategory& cat, ObjectId b, const DegreeOptions& options) {
  if (options.max_b_size <= 0 || !cat.has_structure(b)) return true;
  return cat.structure(b).size() <= options.max_b_size;
}

// Colors renumbered by first occurrence.
std::vector<int> normalized(const std::vector<int>& values) {
  std::map<int, int> relabel;
  std::vector<int> out;
  out.reserve(values.size());
  for (int v : values) {
    auto [it, fresh] = relabel.emplace(v, static_cast<int>(relabel.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

DegreeUpper degree_upper(const FiniteCategory& cat, ObjectId a, int k_max, const DegreeOptions& options) {
  if (k_max < 1) throw Error(ErrorCode::Usage, "k_max must be at least 1");
  const auto order = canonical_order(cat);
  DegreeUpper out;
  out.k_max = k_max;

  int n_max = 1;
  for (ObjectId c = 0; c < cat.object_count(); ++c)
    n_max = std::max(n_max, static_cast<int>(cat.hom(a, c).size()));

  bool undecided_below = false;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<UpperCertificate> certs;
    std::optional<UpperCertificate> rejected;
    bool incomplete = false;
    for (ObjectId b : order) {
      if (!cat.arrow(a, b) || !size_ok(cat, b, options)) continue;
      for (int k = 1; k <= k_max && !rejected; ++k) {
        const auto w = find_ramsey_witness(cat, order, b, a, k, n, options.arrow);
        if (w.witness) {
          certs.push_back({b, k, *w.witness});
        } else {
          rejected = UpperCertificate{b, k, -1};
          incomplete = w.incomplete;
        }
      }
      if (rejected) break;
    }
    if (!rejected) {
      out.degree = n;
      out.certificates = std::move(certs);
      out.status = undecided_below ? Status::Unknown : Status::Holds;
      return out;
    }
    out.rejections.push_back({n, *rejected});
    undecided_below |= incomplete;
  }
  out.status = undecided_below ? Status::Unknown : Status::Holds;
  return out;
}

DegreeLower degree_lower(const FiniteCategory& cat, ObjectId a, int k, int n, const DegreeOptions& options) {
  if (n < 2) throw Error(ErrorCode::Usage, "a lower bound needs n >= 2");
  const auto order = canonical_order(cat);
  DegreeLower out;
  for (ObjectId b : order) {
    if (!cat.arrow(a, b) || !size_ok(cat, b, options)) continue;
    std::vector<LowerCertificate> certs;
    bool all_fail = true;
    for (ObjectId c : order) {
      auto v = arrow_check(cat, c, b, a, k, n - 1, options.arrow);
      if (v.status != Status::Fails) {
        out.incomplete |= v.status == Status::Unknown;
        all_fail = false;
        break;
      }
      certs.push_back({c, std::move(*v.bad_coloring)});
    }
    if (all_fail) {
      out.b = b;
      out.certificates = std::move(certs);
      return out;
    }
  }
  return out;
}

Coloring restrict_coloring(const FiniteCategory& cat, const Coloring& gamma, MorphismId w) {
  if (gamma.domain.empty()) throw Error(ErrorCode::Usage, "coloring of an empty hom-set");
  const ObjectId a = cat.source(gamma.domain.front());
  const ObjectId b = cat.source(w);
  Coloring out;
  out.k = gamma.k;
  for (MorphismId f : cat.hom(a, b)) {
    out.domain.push_back(f);
    out.values.push_back(gamma.values[cat.index_in_hom(cat.compose(w, f))]);
  }
  return out;
}

EssentialityVerdict essential_at(const FiniteCategory& cat, const Coloring& lambda, ObjectId f, int k_max,
                                 const ArrowOptions& options) {
  if (lambda.k < 2) throw Error(ErrorCode::TrivialColoring, "lambda must have at least 2 colors");
  if (lambda.domain.empty()) throw Error(ErrorCode::Usage, "lambda colors an empty hom-set");
  if (k_max < 1) throw Error(ErrorCode::Usage, "k_max must be at least 1");
  const ObjectId a = cat.source(lambda.domain.front());
  const ObjectId b = cat.target(lambda.domain.front());

  ColoringProblem p;
  p.mode = ColoringProblem::Mode::BreakKernel;
  p.colors = k_max;
  p.kernel_class = normalized(lambda.values);
  fill_blocks(cat, f, b, a, p);
  if (options.limits.use_symmetry) p.symmetries = automorphism_permutations(cat, f, a);

  const auto found = find_bad_coloring(p, options.limits, options.exec);
  EssentialityVerdict v;
  v.status = found.status;
  v.stats = found.stats;
  if (found.coloring) {
    const auto hom_af = cat.hom(a, f);
    v.counterexample = Coloring{{hom_af.begin(), hom_af.end()}, k_max, *found.coloring};
  }
  return v;
}

EssentialityVerdict essential(const FiniteCategory& cat, const Coloring& gamma, int k_max,
                              const ArrowOptions& options) {
  if (gamma.k < 2 || gamma.distinct_colors() < 2)
    throw Error(ErrorCode::TrivialColoring, "gamma must use at least 2 colors");
  const ObjectId a = cat.source(gamma.domain.front());
  const ObjectId f = cat.target(gamma.domain.front());

  // essential_at depends only on B and the kernel of the restriction.
  std::map<std::pair<ObjectId, std::vector<int>>, Status> cache;
  EssentialityVerdict out;
  for (ObjectId b : canonical_order(cat)) {
    if (!cat.arrow(a, b)) continue;
    for (MorphismId w : cat.hom(b, f)) {
      const Coloring lambda = restrict_coloring(cat, gamma, w);
      const auto key = std::make_pair(b, normalized(lambda.values));
      auto it = cache.find(key);
      if (it == cache.end()) {
        auto v = essential_at(cat, lambda, f, k_max, options);
        out.stats.nodes += v.stats.nodes;
        out.stats.symmetry_prunes += v.stats.symmetry_prunes;
        it = cache.emplace(key, v.status).first;
        if (v.status == Status::Fails) {
          out.status = Status::Fails;
          out.counterexample = std::move(v.counterexample);
          out.at = {b, w};
          return out;
        }
      }
      out.status = out.status && it->second;
    }
  }
  return out;
}

UnavoidableSearch search_unavoidable(const FiniteCategory& cat, ObjectId a, ObjectId f, int t, int k_max,
                                     const ArrowOptions& options) {
  if (t < 2) throw Error(ErrorCode::TrivialColoring, "t must be at least 2");
  UnavoidableSearch out;
  const auto hom_af = cat.hom(a, f);
  const int n = static_cast<int>(hom_af.size());
  if (n < t) return out;

  std::vector<int> values(n, 0);
  // Restricted growth strings with exactly t blocks, in lexicographic order.
  std::function<bool(int, int)> extend = [&](int i, int used) {
    if (n - i < t - used) return false;
    if (i == n) {
      ++out.candidates_tried;
      Coloring gamma{{hom_af.begin(), hom_af.end()}, t, values};
      const auto v = essential(cat, gamma, k_max, options);
      if (v.status == Status::Holds) {
        out.coloring = std::move(gamma);
        return true;
      }
      out.incomplete |= v.status == Status::Unknown;
      return false;
    }
    for (int c = 0; c <= std::min(used, t - 1); ++c) {
      values[i] = c;
      if (extend(i + 1, std::max(used, c + 1))) return true;
    }
    return false;
  };
  extend(0, 0);
  return out;
}

}  // namespace rw
