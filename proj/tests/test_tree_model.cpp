#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "test_support.hpp"
#include "treeshap/fuzz.hpp"
#include "treeshap/model_io.hpp"
#include "treeshap/tree.hpp"

using namespace treeshap;

namespace {

const char* kSingleLeafDoc = R"({
  "feature_count": 1,
  "aggregation": "mean",
  "trees": [{
    "split_feature": [-1],
    "threshold": [0.0],
    "left_child": [-1],
    "right_child": [-1],
    "leaf_value": [3.0]
  }]
})";

const char* kExampleDoc = R"({
  "feature_count": 3,
  "aggregation": "mean",
  "trees": [{
    "split_feature": [1, 2, 0, -1, -1, -1, -1],
    "threshold": [0.5, 1.33, 0.25, 0.0, 0.0, 0.0, 0.0],
    "left_child": [1, 3, 5, -1, -1, -1, -1],
    "right_child": [2, 4, 6, -1, -1, -1, -1],
    "leaf_value": [0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0]
  }]
})";

}  // namespace

TEST_CASE("single-leaf document parses to a degenerate tree") {
  const Forest forest = parse_model(kSingleLeafDoc);
  REQUIRE(forest.trees.size() == 1);
  const Tree& tree = forest.trees[0];
  CHECK(tree.node_count() == 1);
  CHECK(tree.is_leaf(0));
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.depth() == 0);
  CHECK(tree.evaluate(std::vector<double>{12.5}) == 3.0);
  CHECK(tree.evaluate(std::vector<double>{-1.0}) == 3.0);
}

TEST_CASE("three-split document parses with 4 leaves and 3 internal nodes") {
  const Forest forest = parse_model(kExampleDoc);
  const Tree& tree = forest.trees[0];
  CHECK(tree.node_count() == 7);
  CHECK(tree.leaf_count() == 4);
  CHECK(tree.node_count() - tree.leaf_count() == 3);
  CHECK(tree.feature_count == 3);
}

TEST_CASE("evaluation follows the split comparisons") {
  const Tree tree = ts_test::make_example_tree();
  // x1 <= 0.5 sends the input left, then x2 > 1.33 sends it right to node 4.
  CHECK(tree.evaluate(std::vector<double>{3.4, 0.2, 2.0}) == 2.0);
  // x1 > 0.5 goes right, x0 <= 0.25 goes left to node 5.
  CHECK(tree.evaluate(std::vector<double>{0.1, 0.9, 0.0}) == 3.0);
}

TEST_CASE("ties at the threshold go left") {
  const Tree tree = ts_test::make_and_tree();
  CHECK(tree.evaluate(std::vector<double>{0.0, 1.0}) == 0.0);
  CHECK(tree.evaluate(std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(tree.evaluate(std::vector<double>{1.0, 1.0}) == 1.0);
}

TEST_CASE("non-finite and mis-sized inputs are rejected") {
  const Tree tree = ts_test::make_and_tree();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(tree.evaluate(std::vector<double>{nan, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(tree.evaluate(std::vector<double>{0.0, inf}), std::invalid_argument);
  CHECK_THROWS_AS(tree.evaluate(std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(tree.evaluate(std::vector<double>{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("self-referencing child is reported as a cycle") {
  const std::string broken = R"({
    "feature_count": 1,
    "aggregation": "mean",
    "trees": [{
      "split_feature": [0, -1],
      "threshold": [0.0, 0.0],
      "left_child": [0, -1],
      "right_child": [1, -1],
      "leaf_value": [0.0, 1.0]
    }]
  })";
  CHECK_THROWS_WITH_AS(parse_model(broken), doctest::Contains("cycle"), ModelError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_model("not json"), ModelError);
  CHECK_THROWS_AS(parse_model("{}"), ModelError);
  CHECK_THROWS_AS(parse_model(R"({"feature_count": 2, "trees": []})"), ModelError);
  CHECK_THROWS_AS(parse_model(R"({"feature_count": 2, "aggregation": "median",
      "trees": [{"split_feature": [-1], "threshold": [0], "left_child": [-1],
      "right_child": [-1], "leaf_value": [0]}]})"),
                  ModelError);
}

TEST_CASE("out-of-range split feature names the node and tree") {
  const std::string doc = R"({
    "feature_count": 2,
    "aggregation": "mean",
    "trees": [{
      "split_feature": [7, -1, -1],
      "threshold": [0.0, 0.0, 0.0],
      "left_child": [1, -1, -1],
      "right_child": [2, -1, -1],
      "leaf_value": [0.0, 0.0, 1.0]
    }]
  })";
  try {
    parse_model(doc);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    const std::string what = e.what();
    CHECK(what.find("tree 0") != std::string::npos);
    CHECK(what.find("node 0") != std::string::npos);
    CHECK(what.find("out of range") != std::string::npos);
  }
}

TEST_CASE("orphan and doubly-parented nodes are rejected") {
  Tree orphan = ts_test::make_and_tree();
  orphan.split_feature.push_back(-1);
  orphan.threshold.push_back(0.0);
  orphan.left_child.push_back(-1);
  orphan.right_child.push_back(-1);
  orphan.leaf_value.push_back(9.0);
  CHECK_THROWS_WITH_AS(orphan.validate(), doctest::Contains("not reachable"), ModelError);

  Tree shared = ts_test::make_and_tree();
  shared.right_child[2] = 3;  // both children of node 2 point at node 3
  CHECK_THROWS_WITH_AS(shared.validate(), doctest::Contains("multiple parents"), ModelError);
}

TEST_CASE("non-finite parameters are rejected") {
  Tree bad_threshold = ts_test::make_and_tree();
  bad_threshold.threshold[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(bad_threshold.validate(), doctest::Contains("threshold"), ModelError);

  Tree bad_leaf = ts_test::make_and_tree();
  bad_leaf.leaf_value[4] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS(bad_leaf.validate(), doctest::Contains("leaf value"), ModelError);
}

TEST_CASE("trees deeper than the supported bound are rejected") {
  // A left spine of kMaxTreeDepth + 2 internal nodes, each with a sibling
  // leaf, then a final leaf closing the spine.
  Tree spine;
  spine.feature_count = 1;
  const int levels = kMaxTreeDepth + 2;
  for (int level = 0; level <= levels; ++level) {
    spine.split_feature.push_back(level < levels ? 0 : -1);
    spine.threshold.push_back(0.0);
    spine.left_child.push_back(-1);
    spine.right_child.push_back(-1);
    spine.leaf_value.push_back(0.0);
  }
  for (int level = 0; level < levels; ++level) {
    const int sibling = spine.node_count();
    spine.split_feature.push_back(-1);
    spine.threshold.push_back(0.0);
    spine.left_child.push_back(-1);
    spine.right_child.push_back(-1);
    spine.leaf_value.push_back(1.0);
    spine.left_child[static_cast<size_t>(level)] = level + 1;
    spine.right_child[static_cast<size_t>(level)] = sibling;
  }
  CHECK_THROWS_WITH_AS(spine.validate(), doctest::Contains("deeper"), ModelError);
}

TEST_CASE("forest aggregation: mean and sum") {
  const Tree tree = ts_test::make_example_tree();
  const std::vector<double> x{3.4, 0.2, 2.0};

  Forest one = ts_test::single_tree_forest(tree);
  CHECK(one.evaluate(x) == tree.evaluate(x));

  Forest two_mean = one;
  two_mean.trees.push_back(tree);
  CHECK(two_mean.evaluate(x) == tree.evaluate(x));

  Forest two_sum = two_mean;
  two_sum.aggregation = Aggregation::Sum;
  CHECK(two_sum.evaluate(x) == 2.0 * tree.evaluate(x));
}

TEST_CASE("maximal paths come out leaf-per-path in left-first order") {
  const Tree tree = ts_test::make_example_tree();
  const std::vector<MaximalPath> paths = enumerate_maximal_paths(tree);
  REQUIRE(paths.size() == 4);
  CHECK(paths[0].leaf == 3);
  CHECK(paths[1].leaf == 4);
  CHECK(paths[2].leaf == 5);
  CHECK(paths[3].leaf == 6);
  CHECK(paths[1].edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 4}});
  CHECK(paths[2].edges == std::vector<std::pair<int, int>>{{0, 2}, {2, 5}});

  const Forest single = parse_model(kSingleLeafDoc);
  const std::vector<MaximalPath> degenerate = enumerate_maximal_paths(single.trees[0]);
  REQUIRE(degenerate.size() == 1);
  CHECK(degenerate[0].edges.empty());
  CHECK(degenerate[0].leaf == 0);
  CHECK(degenerate[0].leaf_value == 3.0);
}

TEST_CASE("path count equals leaf count on random trees") {
  FuzzConfig cfg;
  cfg.feature_count = 6;
  cfg.max_depth = 7;
  CounterRng rng(99);
  for (int t = 0; t < 200; ++t) {
    CounterRng tree_rng = rng.substream(static_cast<std::uint64_t>(t));
    const Tree tree = generate_random_tree(cfg, tree_rng);
    tree.validate();
    CHECK(enumerate_maximal_paths(tree).size() == static_cast<size_t>(tree.leaf_count()));
  }
}

TEST_CASE("path stumps gate the leaf value on edge traversal") {
  const Tree tree = ts_test::make_example_tree();
  const std::vector<MaximalPath> paths = enumerate_maximal_paths(tree);
  const MaximalPath& to_node4 = paths[1];

  CHECK(evaluate_path_stump(tree, to_node4, std::vector<double>{3.4, 0.2, 2.0}) == 2.0);
  CHECK(evaluate_path_stump(tree, to_node4, std::vector<double>{3.4, 0.9, 2.0}) == 0.0);
}

TEST_CASE("stumps decompose the tree: one hot path, exact sum") {
  FuzzConfig cfg;
  cfg.feature_count = 5;
  cfg.max_depth = 6;
  CounterRng rng(7);
  for (int t = 0; t < 20; ++t) {
    CounterRng tree_rng = rng.substream(static_cast<std::uint64_t>(t)).substream(0);
    const Tree tree = generate_random_tree(cfg, tree_rng);
    const std::vector<MaximalPath> paths = enumerate_maximal_paths(tree);
    for (int p = 0; p < 100; ++p) {
      CounterRng point_rng = rng.substream(static_cast<std::uint64_t>(t)).substream(1 + p);
      const std::vector<double> x = random_point(cfg, point_rng, cfg.feature_count);
      int nonzero = 0;
      double total = 0.0;
      double hot_value = 0.0;
      for (const MaximalPath& path : paths) {
        const double v = evaluate_path_stump(tree, path, x);
        if (v != 0.0) {
          ++nonzero;
          hot_value = v;
        }
        total += v;
      }
      const double direct = tree.evaluate(x);
      if (direct != 0.0) {
        CHECK(nonzero == 1);
        CHECK(hot_value == direct);
      }
      CHECK(total == direct);  // the sum is the single hot leaf value, exactly
    }
  }
}

TEST_CASE("serialize/parse round-trip preserves behaviour") {
  FuzzConfig cfg;
  cfg.feature_count = 4;
  cfg.max_depth = 5;
  CounterRng rng(1234);
  Forest forest;
  forest.feature_count = cfg.feature_count;
  for (int t = 0; t < 3; ++t) {
    CounterRng tree_rng = rng.substream(static_cast<std::uint64_t>(t));
    forest.trees.push_back(generate_random_tree(cfg, tree_rng));
  }
  forest.validate();

  const Forest reparsed = parse_model(serialize_model(forest));
  REQUIRE(reparsed.trees.size() == forest.trees.size());
  CounterRng point_rng = rng.substream(77);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> x = random_point(cfg, point_rng, cfg.feature_count);
    CHECK(reparsed.evaluate(x) == forest.evaluate(x));
  }
}
