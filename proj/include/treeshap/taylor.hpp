#pragma once

#include <span>

#include "treeshap/game.hpp"
#include "treeshap/tree.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

// Exact pairwise interaction scores for the gap tree(x) - tree(z). The
// diagonal carries main effects, off-diagonal entries split interaction
// credit symmetrically, and the whole matrix sums to the gap.
InteractionMatrix explain_interactions_tree(const Tree& tree, std::span<const double> x,
                                            std::span<const double> z);
InteractionMatrix explain_interactions_tree(const Tree& tree, std::span<const double> x,
                                            std::span<const double> z,
                                            const WeightTable& weights);
InteractionMatrix explain_interactions_forest(const Forest& forest, std::span<const double> x,
                                              std::span<const double> z);
InteractionMatrix explain_interactions_forest(const Forest& forest, std::span<const double> x,
                                              std::span<const double> z,
                                              const WeightTable& weights);

}  // namespace treeshap
