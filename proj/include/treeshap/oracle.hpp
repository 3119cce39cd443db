#pragma once

#include <span>

#include "treeshap/coalition.hpp"
#include "treeshap/game.hpp"
#include "treeshap/tree.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

// Exhaustive-enumeration guards; beyond these the oracles refuse to run.
inline constexpr int kMaxBruteForcePlayers = 20;
inline constexpr int kMaxBruteForceTaylorPlayers = 16;

// Textbook Shapley values by full subset enumeration, in increasing
// bit-pattern order. Exponential; reference oracle only.
AttributionVector brute_force_shapley(const GameEvaluator& game);

// Pairwise indices by full subset enumeration: diagonal entries are the
// lone-player main effects, off-diagonal entries average second differences
// over all subsets excluding the pair.
InteractionMatrix brute_force_shapley_taylor(const GameEvaluator& game);

struct PathClassification {
  bool has_blocked = false;  // some edge lets neither input through
  Coalition s_x;             // features whose path edges only x traverses
  Coalition s_z;             // features whose path edges only z traverses
};

PathClassification classify_path(const Tree& tree, const MaximalPath& path,
                                 std::span<const double> x, std::span<const double> z);

// Shapley values of one path's stump game, by enumeration over the subsets
// of the features collected on the path. Zero when the path has a blocked
// edge or the collected sets overlap.
AttributionVector path_shapley_contribution(const Tree& tree, const MaximalPath& path,
                                            std::span<const double> x,
                                            std::span<const double> z,
                                            const WeightTable& weights);

// Path-by-path reference engine: enumerates every maximal path and sums the
// per-path contributions. Independent of the single-pass traversal.
AttributionVector naive_path_shapley(const Tree& tree, std::span<const double> x,
                                     std::span<const double> z);

}  // namespace treeshap
