#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "test_support.hpp"
#include "treeshap/axioms.hpp"
#include "treeshap/explain.hpp"
#include "treeshap/fuzz.hpp"

using namespace treeshap;

TEST_CASE("counter rng: determinism and substream independence") {
  CounterRng a(42);
  CounterRng b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }

  // A substream's values depend on the key alone, not on parent consumption.
  CounterRng parent1(7);
  CounterRng parent2(7);
  (void)parent2.next_u64();
  (void)parent2.next_u64();
  CounterRng child1 = parent1.substream(3);
  CounterRng child2 = parent2.substream(3);
  for (int i = 0; i < 20; ++i) {
    CHECK(child1.next_u64() == child2.next_u64());
  }

  CounterRng other = parent1.substream(4);
  CHECK(parent1.substream(3).next_u64() != other.next_u64());

  CounterRng unit(11);
  for (int i = 0; i < 1000; ++i) {
    const double v = unit.next_unit();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("random trees: bounds, determinism, validity") {
  FuzzConfig cfg;
  cfg.feature_count = 5;
  cfg.max_depth = 4;

  SUBCASE("depth zero forces a single leaf") {
    FuzzConfig flat = cfg;
    flat.max_depth = 0;
    CounterRng rng(1);
    const Tree tree = generate_random_tree(flat, rng);
    CHECK(tree.node_count() == 1);
    CHECK(tree.is_leaf(0));
  }

  SUBCASE("same seed, same tree") {
    CounterRng rng1(2024);
    CounterRng rng2(2024);
    const Tree t1 = generate_random_tree(cfg, rng1);
    const Tree t2 = generate_random_tree(cfg, rng2);
    CHECK(t1.split_feature == t2.split_feature);
    CHECK(t1.threshold == t2.threshold);
    CHECK(t1.left_child == t2.left_child);
    CHECK(t1.right_child == t2.right_child);
    CHECK(t1.leaf_value == t2.leaf_value);
  }

  SUBCASE("a thousand generated trees all validate") {
    CounterRng rng(77);
    for (int t = 0; t < 1000; ++t) {
      CounterRng tree_rng = rng.substream(static_cast<std::uint64_t>(t));
      const Tree tree = generate_random_tree(cfg, tree_rng);
      CHECK_NOTHROW(tree.validate());
      CHECK(tree.depth() <= cfg.max_depth);
      for (int n = 0; n < tree.node_count(); ++n) {
        if (!tree.is_leaf(n)) {
          CHECK(tree.split_feature[static_cast<size_t>(n)] < cfg.feature_count);
          CHECK(tree.threshold[static_cast<size_t>(n)] >= cfg.threshold_min);
          CHECK(tree.threshold[static_cast<size_t>(n)] <= cfg.threshold_max);
        } else {
          CHECK(tree.leaf_value[static_cast<size_t>(n)] >= cfg.value_min);
          CHECK(tree.leaf_value[static_cast<size_t>(n)] <= cfg.value_max);
        }
      }
    }
  }
}

TEST_CASE("random embedding specs respect their bounds") {
  CounterRng rng(5150);
  for (int i = 0; i < 200; ++i) {
    CounterRng spec_rng = rng.substream(static_cast<std::uint64_t>(i));
    const EmbeddingSpec spec = random_embedding_spec(spec_rng, 10, 6);
    CHECK(spec.embedded_count() <= 10);
    CHECK(spec.raw_count() <= 6);
    CHECK(spec.raw_count() >= 1);
  }
}

TEST_CASE("suite passes on a small default-style config") {
  FuzzConfig cfg;
  cfg.tree_count = 25;
  cfg.pairs_per_tree = 4;
  cfg.feature_count = 6;
  cfg.max_depth = 5;
  const AxiomReport report = run_axiom_suite(cfg);
  for (const PropertyResult& r : report.results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.status == PropertyStatus::Pass);
    CHECK(r.worst_error <= 1e-9);
  }
  CHECK(report.all_passed());
}

TEST_CASE("identical configs produce byte-identical reports") {
  FuzzConfig cfg;
  cfg.tree_count = 10;
  cfg.pairs_per_tree = 3;
  cfg.feature_count = 5;
  cfg.max_depth = 4;
  cfg.seed = 987654321;
  const std::string first = run_axiom_suite(cfg).to_text();
  const std::string second = run_axiom_suite(cfg).to_text();
  CHECK(first == second);
  CHECK(first.find("seed=987654321") != std::string::npos);
}

TEST_CASE("oracle rows are skipped above the dimension cap") {
  FuzzConfig cfg;
  cfg.tree_count = 5;
  cfg.pairs_per_tree = 2;
  cfg.feature_count = 25;  // above the enumeration guard
  cfg.max_depth = 4;
  const AxiomReport report = run_axiom_suite(cfg);

  bool saw_skip = false;
  bool saw_running_invariant = false;
  for (const PropertyResult& r : report.results) {
    if (r.name == "treeshap/oracle") {
      CHECK(r.status == PropertyStatus::Skipped);
      CHECK(r.detail.find("exceeds") != std::string::npos);
      saw_skip = true;
    }
    if (r.name == "treeshap/efficiency") {
      CHECK(r.status == PropertyStatus::Pass);
      saw_running_invariant = true;
    }
  }
  CHECK(saw_skip);
  CHECK(saw_running_invariant);
  CHECK(report.all_passed());  // skipped rows are not failures
}

TEST_CASE("a sign-flipped engine is caught by the efficiency property") {
  FuzzConfig cfg;
  cfg.tree_count = 8;
  cfg.pairs_per_tree = 3;
  cfg.feature_count = 5;
  cfg.max_depth = 4;

  EngineHooks hooks;
  hooks.explain_tree = [](const Tree& tree, std::span<const double> x,
                          std::span<const double> z) {
    AttributionVector phi = explain_tree(tree, x, z);
    for (double& v : phi) {
      v = -v;  // deliberately broken
    }
    return phi;
  };
  const AxiomReport report = run_axiom_suite(cfg, nullptr, hooks);
  CHECK_FALSE(report.all_passed());

  bool efficiency_failed = false;
  for (const PropertyResult& r : report.results) {
    if (r.name == "treeshap/efficiency") {
      efficiency_failed = r.status == PropertyStatus::Fail;
      // Failure records carry enough state to replay the case.
      CHECK(r.detail.find("seed=") != std::string::npos);
      CHECK(r.detail.find("tree=") != std::string::npos);
      CHECK(r.detail.find("pair=") != std::string::npos);
    }
  }
  CHECK(efficiency_failed);
}

TEST_CASE("model rows are appended when a model is supplied") {
  FuzzConfig cfg;
  cfg.tree_count = 5;
  cfg.pairs_per_tree = 2;
  cfg.feature_count = 5;
  cfg.max_depth = 4;

  Forest forest = ts_test::single_tree_forest(ts_test::make_and_tree());
  const AxiomReport report = run_axiom_suite(cfg, &forest);
  int model_rows = 0;
  for (const PropertyResult& r : report.results) {
    if (r.name.rfind("model/", 0) == 0) {
      ++model_rows;
      CHECK(r.status == PropertyStatus::Pass);
    }
  }
  CHECK(model_rows == 3);
}
