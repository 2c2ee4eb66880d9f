#include "rw/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>

#include "rw/error.hpp"

namespace rw {

bool block_is_bad(const ColoringProblem& p, std::span<const int> block, std::span<const int> coloring) {
  if (p.mode == ColoringProblem::Mode::ExceedColors) {
    std::vector<bool> seen(p.colors, false);
    int distinct = 0;
    for (int v : block)
      if (!seen[coloring[v]]) {
        seen[coloring[v]] = true;
        ++distinct;
      }
    return distinct > p.threshold;
  }
  for (std::size_t i = 0; i < block.size(); ++i)
    for (std::size_t j = i + 1; j < block.size(); ++j)
      if (p.kernel_class[i] == p.kernel_class[j] && coloring[block[i]] != coloring[block[j]]) return true;
  return false;
}

bool is_bad_coloring(const ColoringProblem& p, std::span<const int> coloring) {
  if (static_cast<int>(coloring.size()) != p.variables) return false;
  for (int c : coloring)
    if (c < 0 || c >= p.colors) return false;
  return std::all_of(p.blocks.begin(), p.blocks.end(),
                     [&](const auto& b) { return block_is_bad(p, b, coloring); });
}

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  Clock::time_point start = Clock::now();
  std::atomic<long> best_prefix{std::numeric_limits<long>::max()};
};

enum class Result { Found, Exhausted, OutOfBudget, Aborted };

class Dfs {
 public:
  Dfs(const ColoringProblem& p, const SearchLimits& limits, Shared& shared)
      : p_(p), limits_(limits), shared_(shared), k_(p.colors) {
    const int nb = static_cast<int>(p.blocks.size());
    occurrences_.resize(p.variables);
    for (int b = 0; b < nb; ++b)
      for (std::size_t pos = 0; pos < p.blocks[b].size(); ++pos)
        occurrences_[p.blocks[b][pos]].push_back({b, static_cast<int>(pos)});
    assign_.assign(p.variables, -1);
    if (p.mode == ColoringProblem::Mode::ExceedColors) {
      count_.assign(static_cast<std::size_t>(nb) * k_, 0);
      distinct_.assign(nb, 0);
      unassigned_.resize(nb);
      for (int b = 0; b < nb; ++b) unassigned_[b] = static_cast<int>(p.blocks[b].size());
    } else {
      classes_ = 0;
      for (int c : p.kernel_class) classes_ = std::max(classes_, c + 1);
      class_size_.assign(classes_, 0);
      for (int c : p.kernel_class) ++class_size_[c];
      const std::size_t cells = static_cast<std::size_t>(nb) * classes_;
      count_.assign(cells * k_, 0);
      class_distinct_.assign(cells, 0);
      class_unassigned_.resize(cells);
      for (int b = 0; b < nb; ++b)
        for (int c = 0; c < classes_; ++c) class_unassigned_[b * classes_ + c] = class_size_[c];
      violated_.assign(nb, 0);
      open_.assign(nb, 0);
      for (int b = 0; b < nb; ++b)
        for (int c = 0; c < classes_; ++c) open_[b] += is_open(b, c) ? 1 : 0;
    }
  }

  bool root_dead() const {
    for (std::size_t b = 0; b < p_.blocks.size(); ++b)
      if (dead(static_cast<int>(b))) return true;
    return false;
  }

  /// Applies var := color; returns false when some block can no longer be bad.
  bool assign(int var, int color) {
    assign_[var] = color;
    bool ok = true;
    for (auto [b, pos] : occurrences_[var]) {
      if (p_.mode == ColoringProblem::Mode::ExceedColors) {
        if (count_[b * k_ + color]++ == 0) ++distinct_[b];
        --unassigned_[b];
      } else {
        const int cls = p_.kernel_class[pos];
        const std::size_t cell = static_cast<std::size_t>(b) * classes_ + cls;
        const bool was_open = is_open(b, cls);
        if (count_[cell * k_ + color]++ == 0 && ++class_distinct_[cell] == 2) ++violated_[b];
        --class_unassigned_[cell];
        open_[b] += (is_open(b, cls) ? 1 : 0) - (was_open ? 1 : 0);
      }
      if (dead(b)) ok = false;
    }
    return ok;
  }

  void unassign(int var) {
    const int color = assign_[var];
    for (auto [b, pos] : occurrences_[var]) {
      if (p_.mode == ColoringProblem::Mode::ExceedColors) {
        if (--count_[b * k_ + color] == 0) --distinct_[b];
        ++unassigned_[b];
      } else {
        const int cls = p_.kernel_class[pos];
        const std::size_t cell = static_cast<std::size_t>(b) * classes_ + cls;
        const bool was_open = is_open(b, cls);
        if (--count_[cell * k_ + color] == 0 && class_distinct_[cell]-- == 2) --violated_[b];
        ++class_unassigned_[cell];
        open_[b] += (is_open(b, cls) ? 1 : 0) - (was_open ? 1 : 0);
      }
    }
    assign_[var] = -1;
  }

  /// Lex-leader test for the prefix 0..last under every symmetry, comparing
  /// the coloring against the color-normalized permuted coloring.
  bool lex_leader(int last) {
    if (!limits_.use_symmetry) return true;
    std::vector<int> relabel(k_);
    for (const auto& g : p_.symmetries) {
      std::fill(relabel.begin(), relabel.end(), -1);
      int next = 0;
      for (int i = 0; i <= last; ++i) {
        const int j = g[i];
        if (j > last) break;
        int& r = relabel[assign_[j]];
        if (r < 0) r = next++;
        if (r < assign_[i]) {
          ++stats.symmetry_prunes;
          return false;
        }
        if (r > assign_[i]) break;
      }
    }
    return true;
  }

  /// Explores assignments of variables from `depth` on. When `stop_depth` is
  /// reached, `at_stop` decides whether to continue (used to collect prefixes).
  template <class AtStop>
  Result run(int depth, int used, int stop_depth, AtStop&& at_stop, long my_prefix = -1) {
    if (depth == p_.variables) return Result::Found;
    if (depth == stop_depth) return at_stop(assign_) ? Result::Exhausted : Result::Found;
    const int limit = std::min(k_ - 1, used);
    for (int color = 0; color <= limit; ++color) {
      ++stats.nodes;
      if (++since_check_ == check_every_ && !budget_ok(my_prefix)) return stop_reason_;
      const bool ok = assign(depth, color);
      if (ok && lex_leader(depth)) {
        const Result r = run(depth + 1, std::max(used, color + 1), stop_depth, at_stop, my_prefix);
        if (r != Result::Exhausted) {
          if (r != Result::Found) unassign(depth);
          return r;
        }
      }
      unassign(depth);
    }
    return Result::Exhausted;
  }

  const std::vector<int>& coloring() const { return assign_; }
  SearchStats stats;

 private:
  bool is_open(int b, int cls) const {
    if (k_ < 2 || class_size_[cls] < 2) return false;
    const std::size_t cell = static_cast<std::size_t>(b) * classes_ + cls;
    return class_distinct_[cell] < 2 && class_unassigned_[cell] > 0;
  }

  bool dead(int b) const {
    if (p_.mode == ColoringProblem::Mode::ExceedColors)
      return distinct_[b] + std::min(unassigned_[b], k_ - distinct_[b]) <= p_.threshold;
    return violated_[b] == 0 && open_[b] == 0;
  }

  bool budget_ok(long my_prefix) {
    const auto total = shared_.nodes.fetch_add(since_check_) + since_check_;
    since_check_ = 0;
    if (total > limits_.node_budget) {
      stop_reason_ = Result::OutOfBudget;
      return false;
    }
    if (limits_.time_budget_secs > 0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - shared_.start).count();
      if (elapsed > limits_.time_budget_secs) {
        stop_reason_ = Result::OutOfBudget;
        return false;
      }
    }
    if (my_prefix >= 0 && shared_.best_prefix.load(std::memory_order_relaxed) < my_prefix) {
      stop_reason_ = Result::Aborted;
      return false;
    }
    return true;
  }

  struct Occurrence {
    int block, pos;
  };

  const ColoringProblem& p_;
  const SearchLimits& limits_;
  Shared& shared_;
  int k_;
  std::vector<std::vector<Occurrence>> occurrences_;
  std::vector<int> assign_;
  std::vector<int> count_;
  std::vector<int> distinct_, unassigned_;
  int classes_ = 0;
  std::vector<int> class_size_, class_distinct_, class_unassigned_, violated_, open_;
  Result stop_reason_ = Result::OutOfBudget;
  // Small budgets are enforced exactly; large ones are checked in batches.
  std::uint64_t check_every_ = limits_.node_budget < (1u << 16) ? 1 : 1024;
  std::uint64_t since_check_ = 0;
};

void validate(const ColoringProblem& p) {
  if (p.colors < 1) throw Error(ErrorCode::Usage, "number of colors must be at least 1");
  if (p.mode == ColoringProblem::Mode::ExceedColors && p.threshold < 1)
    throw Error(ErrorCode::Usage, "threshold must be at least 1");
  for (const auto& b : p.blocks) {
    for (int v : b)
      if (v < 0 || v >= p.variables) throw Error(ErrorCode::Usage, "block refers to an unknown variable");
    if (p.mode == ColoringProblem::Mode::BreakKernel && b.size() != p.kernel_class.size())
      throw Error(ErrorCode::Usage, "kernel classes do not match block length");
  }
  for (const auto& g : p.symmetries)
    if (static_cast<int>(g.size()) != p.variables) throw Error(ErrorCode::Usage, "symmetry of wrong length");
}

SearchOutcome finish(Result r, const Dfs& dfs) {
  SearchOutcome out;
  out.stats = dfs.stats;
  if (r == Result::Found) {
    out.status = Status::Fails;
    out.coloring = dfs.coloring();
  } else if (r == Result::Exhausted) {
    out.status = Status::Holds;
  } else {
    out.status = Status::Unknown;
  }
  return out;
}

}  // namespace

SearchOutcome find_bad_coloring_serial(const ColoringProblem& p, const SearchLimits& limits) {
  validate(p);
  Shared shared;
  Dfs dfs(p, limits, shared);
  if (dfs.root_dead()) return {};
  const Result r = dfs.run(0, 0, -1, [](const auto&) { return true; });
  return finish(r, dfs);
}

SearchOutcome find_bad_coloring_parallel(const ColoringProblem& p, const SearchLimits& limits) {
  validate(p);
  Shared shared;
  Dfs head(p, limits, shared);
  if (head.root_dead()) return {};

  // Prefix depth: enough subtrees to keep every thread busy.
  int depth = p.variables;
  if (p.colors >= 2)
    depth = std::min(p.variables, static_cast<int>(std::ceil(std::log(256.0) / std::log(p.colors))));

  std::vector<std::vector<int>> prefixes;
  std::vector<int> used_after;
  const Result head_result = head.run(0, 0, depth, [&](const std::vector<int>& assign) {
    prefixes.emplace_back(assign.begin(), assign.begin() + depth);
    int used = 0;
    for (int i = 0; i < depth; ++i) used = std::max(used, assign[i] + 1);
    used_after.push_back(used);
    return true;
  });
  if (head_result == Result::Found) return finish(head_result, head);  // depth == variables case
  if (head_result != Result::Exhausted) return finish(head_result, head);

  const long count = static_cast<long>(prefixes.size());
  std::vector<Result> results(count, Result::Aborted);
  std::vector<SearchStats> stats(count);
  std::vector<std::vector<int>> colorings(count);

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    if (shared.best_prefix.load() < i) continue;
    Dfs worker(p, limits, shared);
    for (int v = 0; v < depth; ++v) worker.assign(v, prefixes[i][v]);
    const Result r = worker.run(depth, used_after[i], -1, [](const auto&) { return true; }, i);
    results[i] = r;
    stats[i] = worker.stats;
    if (r == Result::Found) {
      colorings[i] = worker.coloring();
      long seen = shared.best_prefix.load();
      while (i < seen && !shared.best_prefix.compare_exchange_weak(seen, i)) {
      }
    }
  }

  SearchOutcome out;
  out.stats = head.stats;
  const long best = shared.best_prefix.load();
  bool unknown = false;
  for (long i = 0; i < count && i <= best; ++i) {
    out.stats.nodes += stats[i].nodes;
    out.stats.symmetry_prunes += stats[i].symmetry_prunes;
    unknown |= results[i] == Result::OutOfBudget;
  }
  if (best < count) {
    out.status = Status::Fails;
    out.coloring = colorings[best];
  } else {
    out.status = unknown ? Status::Unknown : Status::Holds;
  }
  return out;
}

SearchOutcome find_bad_coloring(const ColoringProblem& p, const SearchLimits& limits, Execution exec) {
  return exec == Execution::Parallel ? find_bad_coloring_parallel(p, limits) : find_bad_coloring_serial(p, limits);
}

void fill_blocks(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, ColoringProblem& p) {
  const auto hom_ab = cat.hom(a, b);
  const auto hom_ac = cat.hom(a, c);
  p.variables = static_cast<int>(hom_ac.size());
  p.blocks.clear();
  for (MorphismId w : cat.hom(b, c)) {
    std::vector<int> block;
    block.reserve(hom_ab.size());
    for (MorphismId f : hom_ab) block.push_back(cat.index_in_hom(cat.compose(w, f)));
    p.blocks.push_back(std::move(block));
  }
}

std::vector<std::vector<int>> automorphism_permutations(const FiniteCategory& cat, ObjectId c, ObjectId a) {
  std::vector<std::vector<int>> out;
  const auto hom_ac = cat.hom(a, c);
  for (MorphismId g : cat.automorphisms(c)) {
    if (g == cat.identity(c)) continue;
    std::vector<int> perm;
    perm.reserve(hom_ac.size());
    for (MorphismId f : hom_ac) perm.push_back(cat.index_in_hom(cat.compose(g, f)));
    out.push_back(std::move(perm));
  }
  return out;
}

}  // namespace rw
