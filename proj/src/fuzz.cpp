#include "treeshap/fuzz.hpp"

#include <functional>
#include <stdexcept>

namespace treeshap {

namespace {

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9E3779B97F4A7C15ull;
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

}  // namespace

CounterRng CounterRng::substream(std::uint64_t a) const {
  return CounterRng(mix64(key_ ^ mix64(a + 0xA5A5A5A5A5A5A5A5ull)));
}

CounterRng CounterRng::substream(std::uint64_t a, std::uint64_t b) const {
  return substream(a).substream(b);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_real(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

int CounterRng::next_int(int bound) {
  if (bound <= 0) {
    throw std::invalid_argument("next_int: bound must be positive");
  }
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
}

bool CounterRng::next_bool(double p_true) { return next_unit() < p_true; }

Tree generate_random_tree(const FuzzConfig& cfg, CounterRng& rng) {
  if (cfg.feature_count < 1 || cfg.max_depth < 0 || cfg.max_depth > kMaxTreeDepth) {
    throw std::invalid_argument("generate_random_tree: invalid config");
  }
  Tree tree;
  tree.feature_count = cfg.feature_count;

  auto add_node = [&tree]() {
    tree.split_feature.push_back(kLeafSentinel);
    tree.threshold.push_back(0.0);
    tree.left_child.push_back(kLeafSentinel);
    tree.right_child.push_back(kLeafSentinel);
    tree.leaf_value.push_back(0.0);
    return tree.node_count() - 1;
  };

  // Recursion depth is capped by cfg.max_depth.
  std::function<int(int)> build = [&](int depth) -> int {
    const int node = add_node();
    const auto ni = static_cast<size_t>(node);
    const bool forced_leaf = depth >= cfg.max_depth;
    const double p_leaf =
        cfg.max_depth == 0 ? 1.0 : static_cast<double>(depth) / cfg.max_depth;
    if (forced_leaf || rng.next_bool(p_leaf)) {
      tree.leaf_value[ni] = rng.next_real(cfg.value_min, cfg.value_max);
      return node;
    }
    tree.split_feature[ni] = rng.next_int(cfg.feature_count);
    tree.threshold[ni] = rng.next_real(cfg.threshold_min, cfg.threshold_max);
    const int left = build(depth + 1);
    const int right = build(depth + 1);
    tree.left_child[ni] = left;
    tree.right_child[ni] = right;
    return node;
  };
  build(0);
  return tree;
}

std::vector<double> random_point(const FuzzConfig& cfg, CounterRng& rng, int dimension) {
  std::vector<double> point(static_cast<size_t>(dimension));
  for (double& v : point) {
    v = rng.next_real(cfg.threshold_min, cfg.threshold_max);
  }
  return point;
}

EmbeddingSpec random_embedding_spec(CounterRng& rng, int max_embedded, int max_groups) {
  if (max_embedded < 1 || max_groups < 1) {
    throw std::invalid_argument("random_embedding_spec: bounds must be positive");
  }
  EmbeddingSpec spec;
  int width = 0;
  while (spec.raw_count() < max_groups) {
    const bool categorical = rng.next_bool(0.5);
    const int entry_width = categorical ? 2 + rng.next_int(3) : 1;  // one-hot of 2..4
    if (width + entry_width > max_embedded) {
      break;
    }
    spec.features.push_back(categorical
                                ? FeatureEmbedding::one_hot(entry_width)
                                : FeatureEmbedding::identity());
    width += entry_width;
  }
  if (spec.features.empty()) {
    spec.features.push_back(FeatureEmbedding::identity());
  }
  return spec;
}

}  // namespace treeshap
