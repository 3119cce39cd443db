#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace treeshap {

inline constexpr int kLeafSentinel = -1;
inline constexpr int kMaxTreeDepth = 512;

// Raised for malformed or inconsistent model documents.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Aggregation { Mean, Sum };

// Full binary decision tree in array-of-fields encoding, matching the usual
// exported-model layout: children index into the node arrays and -1 marks
// leaf slots. Node 0 is the root. Trees are immutable after validation; all
// operations are read-only and safe to call from many threads.
struct Tree {
  int feature_count = 0;
  std::vector<int> split_feature;  // -1 at leaves
  std::vector<double> threshold;   // meaningful at internal nodes only
  std::vector<int> left_child;     // -1 at leaves
  std::vector<int> right_child;    // -1 at leaves
  std::vector<double> leaf_value;  // meaningful at leaves only

  int node_count() const { return static_cast<int>(split_feature.size()); }
  bool is_leaf(int node) const { return left_child[static_cast<size_t>(node)] == kLeafSentinel; }
  int leaf_count() const;
  int depth() const;

  // Descends from the root, going left iff x[feature] <= threshold (ties go
  // left), and returns the reached leaf's value. Rejects non-finite inputs.
  double evaluate(std::span<const double> x) const;

  // Throws ModelError naming the offending node (and tree, when >= 0).
  void validate(int tree_index = -1) const;
};

struct Forest {
  std::vector<Tree> trees;
  Aggregation aggregation = Aggregation::Mean;
  int feature_count = 0;

  double evaluate(std::span<const double> x) const;
  void validate() const;
};

// Root-to-leaf edge sequence. A single-leaf tree has one path with no edges.
struct MaximalPath {
  std::vector<std::pair<int, int>> edges;  // (parent, child) from the root
  int leaf = 0;
  double leaf_value = 0.0;
};

// One path per leaf, in depth-first left-first order.
std::vector<MaximalPath> enumerate_maximal_paths(const Tree& tree);

// The path's stump function: leaf_value if x traverses every edge of the
// path, 0 otherwise.
double evaluate_path_stump(const Tree& tree, const MaximalPath& path,
                           std::span<const double> x);

}  // namespace treeshap
