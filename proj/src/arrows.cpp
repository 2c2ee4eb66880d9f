#include "rw/arrows.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rw/error.hpp"

namespace rw {

int Coloring::distinct_colors() const {
  std::vector<bool> seen(std::max(k, 1), false);
  int n = 0;
  for (int v : values)
    if (!seen[v]) {
      seen[v] = true;
      ++n;
    }
  return n;
}

namespace {

void require_parameters(const FiniteCategory& cat, ObjectId b, ObjectId a, int k, int t) {
  if (k < 1) throw Error(ErrorCode::Usage, "k must be at least 1");
  if (t < 1) throw Error(ErrorCode::Usage, "t must be at least 1");
  if (!cat.arrow(a, b))
    throw Error(ErrorCode::EmptyHom, "hom(" + cat.object_name(a) + ", " + cat.object_name(b) +
                                         ") is empty; the arrow relation is vacuous");
}

}  // namespace

ArrowVerdict arrow_check(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t,
                         const ArrowOptions& options) {
  require_parameters(cat, b, a, k, t);
  ColoringProblem p;
  p.colors = k;
  p.threshold = t;
  fill_blocks(cat, c, b, a, p);
  if (options.limits.use_symmetry) p.symmetries = automorphism_permutations(cat, c, a);

  const SearchOutcome found = find_bad_coloring(p, options.limits, options.exec);
  ArrowVerdict v;
  v.status = found.status;
  v.stats = found.stats;
  if (found.coloring) {
    const auto hom_ac = cat.hom(a, c);
    v.bad_coloring = Coloring{{hom_ac.begin(), hom_ac.end()}, k, *found.coloring};
  }
  return v;
}

ArrowVerdict oracle_arrow_check(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t,
                                std::uint64_t budget) {
  require_parameters(cat, b, a, k, t);
  const auto hom_ac = cat.hom(a, c);
  const std::size_t n = hom_ac.size();
  const double total = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (total > static_cast<double>(budget))
    throw Error(ErrorCode::BudgetExceeded, "oracle would enumerate " + std::to_string(total) + " colorings");

  // Copies of B, each as the list of positions of w . f in hom(A, C).
  std::vector<std::vector<std::size_t>> copies;
  for (MorphismId w : cat.hom(b, c)) {
    std::vector<std::size_t> positions;
    for (MorphismId f : cat.hom(a, b)) {
      const MorphismId wf = cat.compose(w, f);
      positions.push_back(static_cast<std::size_t>(std::find(hom_ac.begin(), hom_ac.end(), wf) - hom_ac.begin()));
    }
    copies.push_back(std::move(positions));
  }

  ArrowVerdict v;
  std::vector<int> chi(n, 0);
  while (true) {
    ++v.stats.nodes;
    bool bad = true;
    for (const auto& copy : copies) {
      std::vector<int> seen;
      for (std::size_t pos : copy)
        if (std::find(seen.begin(), seen.end(), chi[pos]) == seen.end()) seen.push_back(chi[pos]);
      if (static_cast<int>(seen.size()) <= t) {
        bad = false;
        break;
      }
    }
    if (bad) {
      v.status = Status::Fails;
      v.bad_coloring = Coloring{{hom_ac.begin(), hom_ac.end()}, k, chi};
      return v;
    }
    // Next coloring in lexicographic order (last position fastest).
    std::size_t i = n;
    while (i > 0 && chi[i - 1] == k - 1) chi[--i] = 0;
    if (i == 0) break;
    ++chi[i - 1];
  }
  v.status = Status::Holds;
  return v;
}

bool verify_bad_coloring(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int t, const Coloring& chi) {
  const auto hom_ac = cat.hom(a, c);
  if (!std::equal(hom_ac.begin(), hom_ac.end(), chi.domain.begin(), chi.domain.end())) return false;
  if (chi.values.size() != chi.domain.size()) return false;
  for (int v : chi.values)
    if (v < 0 || v >= chi.k) return false;
  for (MorphismId w : cat.hom(b, c)) {
    std::vector<int> seen;
    for (MorphismId f : cat.hom(a, b)) {
      const int color = chi.values[cat.index_in_hom(cat.compose(w, f))];
      if (std::find(seen.begin(), seen.end(), color) == seen.end()) seen.push_back(color);
    }
    if (static_cast<int>(seen.size()) <= t) return false;
  }
  return true;
}

WitnessSearch find_ramsey_witness(const FiniteCategory& cat, std::span<const ObjectId> candidates, ObjectId b,
                                  ObjectId a, int k, int t, const ArrowOptions& options) {
  WitnessSearch out;
  for (ObjectId c : candidates) {
    if (!cat.arrow(b, c)) continue;
    const auto v = arrow_check(cat, c, b, a, k, t, options);
    if (v.status == Status::Holds) {
      out.witness = c;
      return out;
    }
    out.incomplete |= v.status == Status::Unknown;
  }
  return out;
}

std::string export_cnf(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, int k, int t) {
  require_parameters(cat, b, a, k, t);
  ColoringProblem p;
  fill_blocks(cat, c, b, a, p);
  const int n = p.variables;
  const int blocks = static_cast<int>(p.blocks.size());
  auto x = [&](int i, int color) { return i * k + color + 1; };
  auto y = [&](int w, int color) { return n * k + w * k + color + 1; };

  std::vector<std::vector<int>> clauses;
  for (int i = 0; i < n; ++i) {
    std::vector<int> some;
    for (int col = 0; col < k; ++col) some.push_back(x(i, col));
    clauses.push_back(std::move(some));
    for (int c1 = 0; c1 < k; ++c1)
      for (int c2 = c1 + 1; c2 < k; ++c2) clauses.push_back({-x(i, c1), -x(i, c2)});
  }
  int variables = n * k;
  if (blocks > 0 && t >= k) {
    clauses.push_back({});  // no copy can ever see more than k colors
  } else if (blocks > 0) {
    variables += blocks * k;
    // Subsets of size k - t of the colors, each must contain a color the copy sees.
    std::vector<std::vector<int>> subsets;
    std::vector<int> current;
    std::function<void(int)> choose = [&](int from) {
      if (static_cast<int>(current.size()) == k - t) {
        subsets.push_back(current);
        return;
      }
      for (int col = from; col < k; ++col) {
        current.push_back(col);
        choose(col + 1);
        current.pop_back();
      }
    };
    choose(0);
    for (int w = 0; w < blocks; ++w) {
      for (int col = 0; col < k; ++col) {
        std::vector<int> seen{-y(w, col)};
        for (int v : p.blocks[w]) seen.push_back(x(v, col));
        clauses.push_back(std::move(seen));
      }
      for (const auto& s : subsets) {
        std::vector<int> clause;
        for (int col : s) clause.push_back(y(w, col));
        clauses.push_back(std::move(clause));
      }
    }
  }

  std::ostringstream out;
  out << "c arrow " << cat.object_name(c) << " -> (" << cat.object_name(b) << ")^" << cat.object_name(a) << "_{"
      << k << "," << t << "}\n";
  out << "c models are the bad colorings; UNSAT iff the relation holds\n";
  out << "p cnf " << variables << " " << clauses.size() << "\n";
  for (const auto& clause : clauses) {
    for (int lit : clause) out << lit << " ";
    out << "0\n";
  }
  return out.str();
}

}  // namespace rw
