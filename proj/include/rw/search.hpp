#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rw/category.hpp"
#include "rw/verdict.hpp"

namespace rw {

/// A "bad coloring" problem: color `variables` items with `colors` colors so
/// that every block is bad. Blocks list variable indices (one entry per
/// position). Two notions of bad are supported:
///  - ExceedColors: the block sees more than `threshold` distinct colors;
///  - BreakKernel: two positions in the same `kernel_class` get different colors.
/// The arrow relation and essentiality both reduce to deciding whether a bad
/// coloring exists.
struct ColoringProblem {
  enum class Mode { ExceedColors, BreakKernel };

  int variables = 0;
  int colors = 1;
  Mode mode = Mode::ExceedColors;
  int threshold = 1;
  std::vector<int> kernel_class;  // per block position, BreakKernel only
  std::vector<std::vector<int>> blocks;
  /// Variable permutations mapping bad colorings to bad colorings (the action
  /// of Aut(C) by post-composition). Used for lex-leader pruning.
  std::vector<std::vector<int>> symmetries;
};

struct SearchLimits {
  std::uint64_t node_budget = 200'000'000;
  double time_budget_secs = 0.0;  // 0 = unlimited
  bool use_symmetry = true;
};

struct SearchOutcome {
  /// FAILS: a bad coloring was found (the relation fails). HOLDS: the search
  /// space was exhausted. UNKNOWN: a budget ran out.
  Status status = Status::Holds;
  std::optional<std::vector<int>> coloring;
  SearchStats stats;
};

bool block_is_bad(const ColoringProblem& p, std::span<const int> block, std::span<const int> coloring);
bool is_bad_coloring(const ColoringProblem& p, std::span<const int> coloring);

/// Depth-first search in variable order with value-symmetry (colors are
/// introduced in order) and lex-leader pruning under `symmetries`. Returns the
/// first bad coloring in that order.
SearchOutcome find_bad_coloring_serial(const ColoringProblem& p, const SearchLimits& limits);

/// Same search with subtrees below a fixed prefix depth distributed over
/// OpenMP threads. The reported coloring equals the serial one and the node
/// count is independent of scheduling whenever no budget is hit.
SearchOutcome find_bad_coloring_parallel(const ColoringProblem& p, const SearchLimits& limits);

SearchOutcome find_bad_coloring(const ColoringProblem& p, const SearchLimits& limits, Execution exec);

/// Builds the blocks {w . f : f in hom(a, b)} for w in hom(b, c) as indices
/// into hom(a, c), and the Aut(c) permutations of hom(a, c).
void fill_blocks(const FiniteCategory& cat, ObjectId c, ObjectId b, ObjectId a, ColoringProblem& p);
std::vector<std::vector<int>> automorphism_permutations(const FiniteCategory& cat, ObjectId c, ObjectId a);

}  // namespace rw
