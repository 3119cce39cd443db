#pragma once

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "treeshap/tree.hpp"

namespace ts_test {

// Runs a shell command, returning its exit code.
inline int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status < 0) {
    return -1;
  }
  return (status & 0x7f) == 0 ? (status >> 8) & 0xff : -1;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Data rows of a CSV explanation file: comment and header lines skipped,
// every remaining cell parsed as a double ("avg" baselines become -1).
inline std::vector<std::vector<double>> parse_record_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("instance,", 0) == 0) {
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(cell == "avg" ? -1.0 : std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Two-feature AND model as a 5-node tree: the root sends x0 <= 0 to a zero
// leaf, the right child sends x1 <= 0 to a zero leaf, and only (+,+) inputs
// reach the unit leaf.
inline treeshap::Tree make_and_tree() {
  treeshap::Tree tree;
  tree.feature_count = 2;
  tree.split_feature = {0, -1, 1, -1, -1};
  tree.threshold = {0.0, 0.0, 0.0, 0.0, 0.0};
  tree.left_child = {1, -1, 3, -1, -1};
  tree.right_child = {2, -1, 4, -1, -1};
  tree.leaf_value = {0.0, 0.0, 0.0, 0.0, 1.0};
  return tree;
}

// Three-split example tree: root tests x1 <= 0.5, its left child tests
// x2 <= 1.33, its right child tests x0 <= 0.25; leaves are nodes 3..6.
inline treeshap::Tree make_example_tree(
    std::array<double, 4> leaf_values = {1.0, 2.0, 3.0, 4.0}) {
  treeshap::Tree tree;
  tree.feature_count = 3;
  tree.split_feature = {1, 2, 0, -1, -1, -1, -1};
  tree.threshold = {0.5, 1.33, 0.25, 0.0, 0.0, 0.0, 0.0};
  tree.left_child = {1, 3, 5, -1, -1, -1, -1};
  tree.right_child = {2, 4, 6, -1, -1, -1, -1};
  tree.leaf_value = {0.0, 0.0, 0.0,
                     leaf_values[0], leaf_values[1], leaf_values[2], leaf_values[3]};
  return tree;
}

// Thirteen-node tree containing the six-edge chain 0-1-2-3-4-5-6, with one
// sibling leaf hanging off every internal node. Edge directions along the
// chain: right, right, left, right, right, left.
inline treeshap::Tree make_chain_tree() {
  treeshap::Tree tree;
  tree.feature_count = 3;
  tree.split_feature = {1, 2, 1, 0, 1, 0, -1, -1, -1, -1, -1, -1, -1};
  tree.threshold = {-0.5, 1.5, 1.0, -1.0, -0.33, -1.5, 0, 0, 0, 0, 0, 0, 0};
  tree.left_child = {7, 8, 3, 10, 11, 6, -1, -1, -1, -1, -1, -1, -1};
  tree.right_child = {1, 2, 9, 4, 5, 12, -1, -1, -1, -1, -1, -1, -1};
  tree.leaf_value = {0, 0, 0, 0, 0, 0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  return tree;
}

inline treeshap::MaximalPath chain_path() {
  treeshap::MaximalPath path;
  path.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  path.leaf = 6;
  path.leaf_value = 1.0;
  return path;
}

inline treeshap::Forest single_tree_forest(treeshap::Tree tree) {
  treeshap::Forest forest;
  forest.feature_count = tree.feature_count;
  forest.aggregation = treeshap::Aggregation::Mean;
  forest.trees.push_back(std::move(tree));
  return forest;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
    if (d > worst) {
      worst = d;
    }
  }
  return worst;
}

}  // namespace ts_test
