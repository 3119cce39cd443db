#pragma once

#include <cstddef>
#include <span>

#include "treeshap/coalition.hpp"
#include "treeshap/game.hpp"
#include "treeshap/tree.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

// Joint behaviour of an edge for an input pair: only x traverses it, only z
// does, both do (F), or neither does (B).
enum class EdgeType { X, Z, F, B };

EdgeType classify_edge(const Tree& tree, int node, int child,
                       std::span<const double> x, std::span<const double> z);

// Per-path bookkeeping: membership keys credited to the x side and the z side
// along the path so far. The routing keeps the two sets disjoint.
struct PathState {
  Coalition s_x;
  Coalition s_z;

  int union_cardinality() const { return s_x.cardinality() + s_z.cardinality(); }
};

struct TraversalStats {
  std::size_t nodes_visited = 0;
  std::size_t leaf_work = 0;  // total leaf-loop iterations
  bool revisit_detected = false;
};

// Exact per-feature scores for the gap tree(x) - tree(z), computed in a
// single pass that enters each node at most once.
AttributionVector explain_tree(const Tree& tree, std::span<const double> x,
                               std::span<const double> z);
AttributionVector explain_tree(const Tree& tree, std::span<const double> x,
                               std::span<const double> z, const WeightTable& weights);
AttributionVector explain_forest(const Forest& forest, std::span<const double> x,
                                 std::span<const double> z);
AttributionVector explain_forest(const Forest& forest, std::span<const double> x,
                                 std::span<const double> z, const WeightTable& weights);

// Score a reached leaf contributes to one feature: positive weight for
// features credited to the x side, negative for the z side.
double leaf_contribution(int s_x_card, int s_xz_card, bool in_s_x, double leaf_value,
                         const WeightTable& weights);
double leaf_contribution(int s_x_card, int s_xz_card, bool in_s_x, double leaf_value);

// Instrumented explain_tree run: distinct node visits and leaf-loop work.
TraversalStats visit_counter(const Tree& tree, std::span<const double> x,
                             std::span<const double> z);

}  // namespace treeshap
