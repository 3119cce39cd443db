#include "treeshap/explain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "treeshap/detail/traverse.hpp"

namespace treeshap {

namespace {

void check_inputs(const Tree& tree, std::span<const double> x, std::span<const double> z) {
  if (tree.feature_count > Coalition::kCapacity) {
    throw std::invalid_argument("explanations support at most " +
                                std::to_string(Coalition::kCapacity) + " features, model has " +
                                std::to_string(tree.feature_count));
  }
  if (static_cast<int>(x.size()) != tree.feature_count ||
      static_cast<int>(z.size()) != tree.feature_count) {
    throw std::invalid_argument("input length does not match feature_count");
  }
  for (int i = 0; i < tree.feature_count; ++i) {
    if (!std::isfinite(x[static_cast<size_t>(i)]) || !std::isfinite(z[static_cast<size_t>(i)])) {
      throw std::invalid_argument("non-finite feature value");
    }
  }
}

void explain_tree_into(const Tree& tree, std::span<const double> x, std::span<const double> z,
                       const WeightTable& weights, double* phi, TraversalStats* stats) {
  detail::traverse(
      tree, x, z, [](int feature) { return feature; },
      [&](double leaf_value, const PathState& state) {
        detail::add_leaf_scores(leaf_value, state, weights, phi);
      },
      stats);
}

}  // namespace

EdgeType classify_edge(const Tree& tree, int node, int child, std::span<const double> x,
                       std::span<const double> z) {
  if (node < 0 || node >= tree.node_count() || tree.is_leaf(node)) {
    throw std::invalid_argument("classify_edge: node " + std::to_string(node) +
                                " is not an internal node");
  }
  const auto ni = static_cast<size_t>(node);
  const bool is_left_edge = tree.left_child[ni] == child;
  if (!is_left_edge && tree.right_child[ni] != child) {
    throw std::invalid_argument("classify_edge: (" + std::to_string(node) + ", " +
                                std::to_string(child) + ") is not an edge");
  }
  check_inputs(tree, x, z);
  const auto feature = static_cast<size_t>(tree.split_feature[ni]);
  const bool x_left = x[feature] <= tree.threshold[ni];
  const bool z_left = z[feature] <= tree.threshold[ni];
  const bool x_flows = x_left == is_left_edge;
  const bool z_flows = z_left == is_left_edge;
  if (x_flows && z_flows) return EdgeType::F;
  if (x_flows) return EdgeType::X;
  if (z_flows) return EdgeType::Z;
  return EdgeType::B;
}

AttributionVector explain_tree(const Tree& tree, std::span<const double> x,
                               std::span<const double> z) {
  const WeightTable weights(tree.feature_count);
  return explain_tree(tree, x, z, weights);
}

AttributionVector explain_tree(const Tree& tree, std::span<const double> x,
                               std::span<const double> z, const WeightTable& weights) {
  check_inputs(tree, x, z);
  if (weights.max_players() < tree.feature_count) {
    throw std::invalid_argument("weight table too small for this model");
  }
  AttributionVector phi(static_cast<size_t>(tree.feature_count), 0.0);
  explain_tree_into(tree, x, z, weights, phi.data(), nullptr);
  return phi;
}

AttributionVector explain_forest(const Forest& forest, std::span<const double> x,
                                 std::span<const double> z) {
  const WeightTable weights(forest.feature_count);
  return explain_forest(forest, x, z, weights);
}

AttributionVector explain_forest(const Forest& forest, std::span<const double> x,
                                 std::span<const double> z, const WeightTable& weights) {
  if (forest.trees.empty()) {
    throw std::invalid_argument("explain_forest: empty forest");
  }
  AttributionVector phi(static_cast<size_t>(forest.feature_count), 0.0);
  for (const Tree& tree : forest.trees) {
    check_inputs(tree, x, z);
    explain_tree_into(tree, x, z, weights, phi.data(), nullptr);
  }
  if (forest.aggregation == Aggregation::Mean) {
    const auto n = static_cast<double>(forest.trees.size());
    for (double& v : phi) {
      v /= n;
    }
  }
  return phi;
}

double leaf_contribution(int s_x_card, int s_xz_card, bool in_s_x, double leaf_value,
                         const WeightTable& weights) {
  if (s_xz_card < 1 || s_x_card < 0 || s_x_card > s_xz_card || (in_s_x && s_x_card < 1)) {
    throw std::invalid_argument("leaf_contribution: invalid set cardinalities");
  }
  if (in_s_x) {
    return weights(s_x_card - 1, s_xz_card) * leaf_value;
  }
  return -(weights(s_x_card, s_xz_card) * leaf_value);
}

double leaf_contribution(int s_x_card, int s_xz_card, bool in_s_x, double leaf_value) {
  if (s_xz_card < 1 || s_xz_card > kMaxWeightPlayers) {
    throw std::invalid_argument("leaf_contribution: invalid set cardinalities");
  }
  const WeightTable weights(s_xz_card);
  return leaf_contribution(s_x_card, s_xz_card, in_s_x, leaf_value, weights);
}

TraversalStats visit_counter(const Tree& tree, std::span<const double> x,
                             std::span<const double> z) {
  check_inputs(tree, x, z);
  const WeightTable weights(tree.feature_count);
  AttributionVector phi(static_cast<size_t>(tree.feature_count), 0.0);
  TraversalStats stats;
  explain_tree_into(tree, x, z, weights, phi.data(), &stats);
  return stats;
}

}  // namespace treeshap
