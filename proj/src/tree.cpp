#include "treeshap/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace treeshap {

namespace {

std::string node_context(int tree_index, int node) {
  char buf[64];
  if (tree_index >= 0) {
    std::snprintf(buf, sizeof buf, "tree %d, node %d: ", tree_index, node);
  } else {
    std::snprintf(buf, sizeof buf, "node %d: ", node);
  }
  return buf;
}

void check_point(std::span<const double> x, int feature_count) {
  if (static_cast<int>(x.size()) != feature_count) {
    throw std::invalid_argument("input has " + std::to_string(x.size()) +
                                " features, model expects " + std::to_string(feature_count));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite feature value");
    }
  }
}

}  // namespace

int Tree::leaf_count() const {
  int leaves = 0;
  for (int n = 0; n < node_count(); ++n) {
    leaves += is_leaf(n) ? 1 : 0;
  }
  return leaves;
}

int Tree::depth() const {
  // Explicit stack; node depth counted in edges from the root.
  int deepest = 0;
  std::vector<std::pair<int, int>> pending{{0, 0}};
  while (!pending.empty()) {
    auto [n, d] = pending.back();
    pending.pop_back();
    deepest = std::max(deepest, d);
    if (!is_leaf(n)) {
      pending.emplace_back(left_child[static_cast<size_t>(n)], d + 1);
      pending.emplace_back(right_child[static_cast<size_t>(n)], d + 1);
    }
  }
  return deepest;
}

double Tree::evaluate(std::span<const double> x) const {
  check_point(x, feature_count);
  int n = 0;
  while (!is_leaf(n)) {
    const auto ni = static_cast<size_t>(n);
    n = x[static_cast<size_t>(split_feature[ni])] <= threshold[ni] ? left_child[ni]
                                                                   : right_child[ni];
  }
  return leaf_value[static_cast<size_t>(n)];
}

void Tree::validate(int tree_index) const {
  const int n_nodes = node_count();
  if (n_nodes < 1) {
    throw ModelError(node_context(tree_index, 0) + "tree has no nodes");
  }
  if (feature_count < 1) {
    throw ModelError(node_context(tree_index, 0) + "feature_count must be positive");
  }
  const auto count = static_cast<size_t>(n_nodes);
  if (threshold.size() != count || left_child.size() != count ||
      right_child.size() != count || leaf_value.size() != count) {
    throw ModelError(node_context(tree_index, 0) + "node arrays have inconsistent lengths");
  }

  std::vector<int> parents(count, 0);
  for (int n = 0; n < n_nodes; ++n) {
    const auto ni = static_cast<size_t>(n);
    const int l = left_child[ni];
    const int r = right_child[ni];
    if ((l == kLeafSentinel) != (r == kLeafSentinel)) {
      throw ModelError(node_context(tree_index, n) + "exactly one child is a sentinel");
    }
    if (l == kLeafSentinel) {
      if (split_feature[ni] != kLeafSentinel) {
        throw ModelError(node_context(tree_index, n) + "leaf carries a split feature");
      }
      if (!std::isfinite(leaf_value[ni])) {
        throw ModelError(node_context(tree_index, n) + "non-finite leaf value");
      }
      continue;
    }
    if (l < 0 || l >= n_nodes || r < 0 || r >= n_nodes) {
      throw ModelError(node_context(tree_index, n) + "child index out of range");
    }
    if (split_feature[ni] < 0 || split_feature[ni] >= feature_count) {
      throw ModelError(node_context(tree_index, n) + "split feature " +
                       std::to_string(split_feature[ni]) + " out of range [0, " +
                       std::to_string(feature_count) + ")");
    }
    if (!std::isfinite(threshold[ni])) {
      throw ModelError(node_context(tree_index, n) + "non-finite threshold");
    }
    parents[static_cast<size_t>(l)] += 1;
    parents[static_cast<size_t>(r)] += 1;
  }

  if (parents[0] != 0) {
    throw ModelError(node_context(tree_index, 0) +
                     "root is referenced as a child (cycle or duplicate parent)");
  }
  for (int n = 1; n < n_nodes; ++n) {
    if (parents[static_cast<size_t>(n)] == 0) {
      throw ModelError(node_context(tree_index, n) + "node is not reachable from the root");
    }
    if (parents[static_cast<size_t>(n)] > 1) {
      throw ModelError(node_context(tree_index, n) +
                       "node has multiple parents (cycle or shared subtree)");
    }
  }

  // In-degrees are correct, so the structure is a tree rooted at 0; bound its
  // depth so downstream traversals can rely on it.
  int deepest = 0;
  std::vector<std::pair<int, int>> pending{{0, 0}};
  while (!pending.empty()) {
    auto [n, d] = pending.back();
    pending.pop_back();
    deepest = std::max(deepest, d);
    if (d > kMaxTreeDepth) {
      throw ModelError(node_context(tree_index, n) + "tree deeper than " +
                       std::to_string(kMaxTreeDepth));
    }
    if (!is_leaf(n)) {
      pending.emplace_back(left_child[static_cast<size_t>(n)], d + 1);
      pending.emplace_back(right_child[static_cast<size_t>(n)], d + 1);
    }
  }
}

double Forest::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (const Tree& tree : trees) {
    sum += tree.evaluate(x);
  }
  if (aggregation == Aggregation::Mean) {
    sum /= static_cast<double>(trees.size());
  }
  return sum;
}

void Forest::validate() const {
  if (trees.empty()) {
    throw ModelError("forest has no trees");
  }
  for (size_t t = 0; t < trees.size(); ++t) {
    trees[t].validate(static_cast<int>(t));
    if (trees[t].feature_count != feature_count) {
      throw ModelError("tree " + std::to_string(t) + ": feature_count " +
                       std::to_string(trees[t].feature_count) + " differs from forest's " +
                       std::to_string(feature_count));
    }
  }
}

std::vector<MaximalPath> enumerate_maximal_paths(const Tree& tree) {
  std::vector<MaximalPath> paths;
  paths.reserve(static_cast<size_t>(tree.leaf_count()));

  // (node, depth, parent); the running edge list is truncated to the popped
  // frame's depth, which restores the path state without recursion.
  struct Frame {
    int node;
    int depth;
    int parent;
  };
  std::vector<std::pair<int, int>> edges;
  std::vector<Frame> pending{{0, 0, -1}};
  while (!pending.empty()) {
    const Frame f = pending.back();
    pending.pop_back();
    edges.resize(static_cast<size_t>(f.depth > 0 ? f.depth - 1 : 0));
    if (f.depth > 0) {
      edges.emplace_back(f.parent, f.node);
    }
    if (tree.is_leaf(f.node)) {
      paths.push_back(MaximalPath{edges, f.node,
                                  tree.leaf_value[static_cast<size_t>(f.node)]});
      continue;
    }
    pending.push_back({tree.right_child[static_cast<size_t>(f.node)], f.depth + 1, f.node});
    pending.push_back({tree.left_child[static_cast<size_t>(f.node)], f.depth + 1, f.node});
  }
  return paths;
}

double evaluate_path_stump(const Tree& tree, const MaximalPath& path,
                           std::span<const double> x) {
  check_point(x, tree.feature_count);
  for (const auto& [parent, child] : path.edges) {
    const auto pi = static_cast<size_t>(parent);
    const bool goes_left = x[static_cast<size_t>(tree.split_feature[pi])] <= tree.threshold[pi];
    const bool is_left_edge = tree.left_child[pi] == child;
    if (goes_left != is_left_edge) {
      return 0.0;
    }
  }
  return path.leaf_value;
}

}  // namespace treeshap
