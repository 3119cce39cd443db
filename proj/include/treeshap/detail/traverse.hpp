#pragma once

#include <span>
#include <vector>

#include "treeshap/explain.hpp"
#include "treeshap/tree.hpp"
#include "treeshap/weights.hpp"

namespace treeshap::detail {

// Leaf rule shared by the per-feature and per-group engines: every key
// collected on the path earns a weighted share of the leaf value, positive
// on the x side, negative on the z side. Keys are visited in ascending order.
inline void add_leaf_scores(double leaf_value, const PathState& state,
                            const WeightTable& weights, double* phi) {
  const int s_x_card = state.s_x.cardinality();
  const int s_xz_card = s_x_card + state.s_z.cardinality();
  if (s_xz_card == 0) {
    return;
  }
  const double gain =
      s_x_card > 0 ? weights(s_x_card - 1, s_xz_card) * leaf_value : 0.0;
  const double loss =
      state.s_z.empty() ? 0.0 : weights(s_x_card, s_xz_card) * leaf_value;
  state.s_x.united(state.s_z).for_each([&](int key) {
    if (state.s_x.contains(key)) {
      phi[key] += gain;
    } else {
      phi[key] -= loss;
    }
  });
}

// Depth-first walk shared by the attribution engines. At every internal node:
//   - both inputs reach the same child: follow that child, sets unchanged;
//   - the split's key was collected before: follow the side it was collected
//     on, so the two sets stay disjoint;
//   - otherwise fork, crediting the key to the x side on one branch and to
//     the z side on the other.
// KeyOf maps a split feature to its membership key (the feature itself, or
// its group). LeafFn receives the leaf value and the per-path state; x-branch
// leaves are reached before their z-branch counterparts.
template <typename KeyOf, typename LeafFn>
void traverse(const Tree& tree, std::span<const double> x, std::span<const double> z,
              KeyOf&& key_of, LeafFn&& on_leaf, TraversalStats* stats = nullptr) {
  struct Frame {
    int node;
    PathState state;
  };

  std::vector<char> seen;
  if (stats != nullptr) {
    seen.assign(static_cast<size_t>(tree.node_count()), 0);
  }

  std::vector<Frame> pending;
  pending.push_back(Frame{0, PathState{}});
  while (!pending.empty()) {
    const Frame frame = pending.back();
    pending.pop_back();
    const int n = frame.node;
    if (stats != nullptr) {
      ++stats->nodes_visited;
      if (seen[static_cast<size_t>(n)]) {
        stats->revisit_detected = true;
      }
      seen[static_cast<size_t>(n)] = 1;
    }

    if (tree.is_leaf(n)) {
      if (stats != nullptr) {
        stats->leaf_work += static_cast<std::size_t>(frame.state.union_cardinality());
      }
      on_leaf(tree.leaf_value[static_cast<size_t>(n)], frame.state);
      continue;
    }

    const auto ni = static_cast<size_t>(n);
    const int feature = tree.split_feature[ni];
    const int key = key_of(feature);
    const int x_child = x[static_cast<size_t>(feature)] <= tree.threshold[ni]
                            ? tree.left_child[ni]
                            : tree.right_child[ni];
    const int z_child = z[static_cast<size_t>(feature)] <= tree.threshold[ni]
                            ? tree.left_child[ni]
                            : tree.right_child[ni];

    if (x_child == z_child) {
      pending.push_back(Frame{x_child, frame.state});
    } else if (frame.state.s_x.contains(key)) {
      pending.push_back(Frame{x_child, frame.state});
    } else if (frame.state.s_z.contains(key)) {
      pending.push_back(Frame{z_child, frame.state});
    } else {
      Frame z_branch{z_child, frame.state};
      z_branch.state.s_z.insert(key);
      Frame x_branch{x_child, frame.state};
      x_branch.state.s_x.insert(key);
      pending.push_back(z_branch);  // popped after the x branch
      pending.push_back(x_branch);
    }
  }
}

}  // namespace treeshap::detail
