#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treeshap/partition.hpp"
#include "treeshap/tree.hpp"

namespace treeshap {

// Deterministic counter-based generator. Substreams are derived from the key
// alone, so a child stream's values do not depend on how many numbers the
// parent has produced; campaigns can shard work and stay reproducible.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  CounterRng substream(std::uint64_t a) const;
  CounterRng substream(std::uint64_t a, std::uint64_t b) const;

  std::uint64_t next_u64();
  double next_unit();  // [0, 1)
  double next_real(double lo, double hi);
  int next_int(int bound);  // [0, bound)
  bool next_bool(double p_true);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

struct FuzzConfig {
  std::uint64_t seed = 20240915;
  int tree_count = 200;
  int max_depth = 6;
  int feature_count = 10;
  int pairs_per_tree = 10;
  double value_min = -4.0;
  double value_max = 4.0;
  double threshold_min = -2.0;
  double threshold_max = 2.0;
  // Oracle comparisons are skipped (not failed) above this dimension.
  int max_oracle_dim = 20;
  std::optional<EmbeddingSpec> group_spec;
};

// Random full binary tree: a node becomes a leaf with probability
// depth / max_depth, and always at max_depth. Split features, thresholds and
// leaf values are drawn uniformly from the configured ranges. Deterministic
// given the generator state.
Tree generate_random_tree(const FuzzConfig& cfg, CounterRng& rng);

// Point with coordinates uniform over the threshold range.
std::vector<double> random_point(const FuzzConfig& cfg, CounterRng& rng, int dimension);

// Mix of identity and one-hot entries with embedded width <= max_embedded
// and at most max_groups raw features.
EmbeddingSpec random_embedding_spec(CounterRng& rng, int max_embedded, int max_groups);

}  // namespace treeshap
