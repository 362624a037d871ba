#pragma once

// Variable elimination over modular Bayesian networks, elimination orders
// and the width measures attached to them.

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/factor.hpp"
#include "petrimbn/mbn.hpp"

namespace pmbn {

/// Internal wire ids in elimination sequence.
using ElimOrder = std::vector<std::size_t>;

inline constexpr std::size_t kExactWidthLimit = 8;

/// One factor per node over its source and target wires.
std::vector<Factor> initial_factors(const Mbn& b);

/// Greedy minimal degree in the wire graph with fill-in; ties go to the smallest wire id.
ElimOrder min_degree_order(const Mbn& b);

/// Largest factor met while eliminating: for every eliminated wire w the
/// number of its current neighbours, and the wire count of every node w
/// belongs to. Zero when nothing is eliminated. Throws BadOrder.
std::size_t order_width(const Mbn& b, const ElimOrder& order);

/// Minimum of order_width over all orders. Throws TooLarge beyond kExactWidthLimit internal wires.
std::size_t elimination_width_exact(const Mbn& b);

struct EliminationOptions {
  /// Merge input and output wires of diagonal nodes into one class.
  bool merge_diagonals = true;
  /// Remove wires the table does not depend on after every step.
  bool drop_vacuous = true;
  /// Pin wires whose value is known with certainty.
  bool pin_definite = true;
  /// Sum out wires held by a single factor before following the order.
  bool fold_single = true;
  /// Split structured update nodes into small factors joined by hidden choice
  /// and enabledness wires instead of one table over all their wires.
  bool expand_updates = true;

  static EliminationOptions plain() { return {false, false, false, false, false}; }
};

struct EliminationStats {
  /// Wires attached to the largest node matrix, counted as classes when merging.
  std::size_t max_factor_wires = 0;
  /// Largest wire count of a factor table built during the run.
  std::size_t max_table_wires = 0;
  /// Largest factor produced by summing out wires.
  std::size_t max_intermediate_wires = 0;
  std::size_t max_factor_entries = 0;
  std::size_t eliminated = 0;
  std::size_t pinned = 0;
  std::size_t merged = 0;
};

/// Evaluates b by eliminating its internal wires in `order`. Throws BadOrder
/// when the order is not a permutation of the internal wires.
Matrix run_elimination(const Mbn& b, const ElimOrder& order, const EliminationOptions& opts = {},
                       EliminationStats* stats = nullptr);
/// As above, choosing the next wire by minimal degree in the current factor set.
Matrix run_elimination_auto(const Mbn& b, const EliminationOptions& opts = {}, EliminationStats* stats = nullptr);

struct TreeDecomposition {
  std::vector<std::set<std::size_t>> bags;                  // wire ids
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // between bag indices
};

/// Checks the decomposition and returns max bag size - 1; throws InvalidDecomposition naming the failed condition.
std::size_t validate_tree_decomposition(const Mbn& b, const TreeDecomposition& td);

/// Bags {w} u X_w in elimination sequence, each linked to the bag of its first eliminated neighbour.
TreeDecomposition decomposition_from_order(const Mbn& b, const ElimOrder& order);

}  // namespace pmbn
