#include "treeshap/taylor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "treeshap/coalition.hpp"
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

// Leaf rule for pairwise scores, over ordered pairs of collected features.
// Diagonal: the leaf value goes to i when the x side holds exactly {i}, and
// is taken from i when the x side is empty (i is then on the z side).
// Off-diagonal: same-side pairs gain, mixed pairs lose; both updates are
// symmetric in (i, j).
void add_leaf_interactions(double leaf_value, const PathState& state,
                           const WeightTable& weights, InteractionMatrix& out) {
  const int s_x_card = state.s_x.cardinality();
  const int s_xz_card = s_x_card + state.s_z.cardinality();
  if (s_xz_card == 0) {
    return;
  }

  int members[Coalition::kCapacity];
  int member_count = 0;
  state.s_x.united(state.s_z).for_each([&](int key) { members[member_count++] = key; });

  const double both_x =
      s_x_card >= 2 ? weights(s_x_card - 2, s_xz_card) * leaf_value : 0.0;
  const double both_z =
      s_xz_card - s_x_card >= 2 ? weights(s_x_card, s_xz_card) * leaf_value : 0.0;
  const double mixed =
      s_x_card >= 1 && s_xz_card > s_x_card ? weights(s_x_card - 1, s_xz_card) * leaf_value
                                            : 0.0;

  for (int a = 0; a < member_count; ++a) {
    const int i = members[a];
    const bool i_in_x = state.s_x.contains(i);
    for (int b = 0; b < member_count; ++b) {
      const int j = members[b];
      if (i == j) {
        if (i_in_x && s_x_card == 1) {
          out.at(i, i) += leaf_value;
        } else if (s_x_card == 0) {
          out.at(i, i) -= leaf_value;
        }
        continue;
      }
      const bool j_in_x = state.s_x.contains(j);
      if (i_in_x && j_in_x) {
        out.at(i, j) += both_x;
      } else if (!i_in_x && !j_in_x) {
        out.at(i, j) += both_z;
      } else {
        out.at(i, j) -= mixed;
      }
    }
  }
}

void explain_interactions_into(const Tree& tree, std::span<const double> x,
                               std::span<const double> z, const WeightTable& weights,
                               InteractionMatrix& out) {
  detail::traverse(
      tree, x, z, [](int feature) { return feature; },
      [&](double leaf_value, const PathState& state) {
        add_leaf_interactions(leaf_value, state, weights, out);
      });
}

}  // namespace

InteractionMatrix explain_interactions_tree(const Tree& tree, std::span<const double> x,
                                            std::span<const double> z) {
  const WeightTable weights(tree.feature_count);
  return explain_interactions_tree(tree, x, z, weights);
}

InteractionMatrix explain_interactions_tree(const Tree& tree, std::span<const double> x,
                                            std::span<const double> z,
                                            const WeightTable& weights) {
  check_inputs(tree, x, z);
  if (weights.max_players() < tree.feature_count) {
    throw std::invalid_argument("weight table too small for this model");
  }
  InteractionMatrix out(tree.feature_count);
  explain_interactions_into(tree, x, z, weights, out);
  return out;
}

InteractionMatrix explain_interactions_forest(const Forest& forest, std::span<const double> x,
                                              std::span<const double> z) {
  const WeightTable weights(forest.feature_count);
  return explain_interactions_forest(forest, x, z, weights);
}

InteractionMatrix explain_interactions_forest(const Forest& forest, std::span<const double> x,
                                              std::span<const double> z,
                                              const WeightTable& weights) {
  if (forest.trees.empty()) {
    throw std::invalid_argument("explain_interactions_forest: empty forest");
  }
  InteractionMatrix out(forest.feature_count);
  for (const Tree& tree : forest.trees) {
    check_inputs(tree, x, z);
    explain_interactions_into(tree, x, z, weights, out);
  }
  if (forest.aggregation == Aggregation::Mean) {
    const auto n = static_cast<double>(forest.trees.size());
    for (double& v : out.values) {
      v /= n;
    }
  }
  return out;
}

}  // namespace treeshap
