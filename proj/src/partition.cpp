#include "treeshap/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "treeshap/detail/traverse.hpp"

namespace treeshap {

PartitionIndex::PartitionIndex(std::vector<int> group_of, int group_count)
    : group_of_(std::move(group_of)), group_count_(group_count) {
  if (group_count_ < 1) {
    throw std::invalid_argument("PartitionIndex: group_count must be positive");
  }
  if (group_of_.empty()) {
    throw std::invalid_argument("PartitionIndex: empty coordinate map");
  }
  std::vector<char> hit(static_cast<size_t>(group_count_), 0);
  for (size_t i = 0; i < group_of_.size(); ++i) {
    const int g = group_of_[i];
    if (g < 0 || g >= group_count_) {
      throw std::invalid_argument("PartitionIndex: coordinate " + std::to_string(i) +
                                  " maps to group " + std::to_string(g) + ", outside [0, " +
                                  std::to_string(group_count_) + ")");
    }
    hit[static_cast<size_t>(g)] = 1;
  }
  for (int g = 0; g < group_count_; ++g) {
    if (!hit[static_cast<size_t>(g)]) {
      throw std::invalid_argument("PartitionIndex: group " + std::to_string(g) +
                                  " has no coordinates (map must be surjective)");
    }
  }
  if (embedded_count() <= Coalition::kCapacity && group_count_ <= Coalition::kCapacity) {
    group_masks_.assign(static_cast<size_t>(group_count_), 0);
    for (size_t i = 0; i < group_of_.size(); ++i) {
      group_masks_[static_cast<size_t>(group_of_[i])] |= std::uint64_t{1} << i;
    }
  }
}

PartitionIndex PartitionIndex::identity(int d) {
  std::vector<int> map(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    map[static_cast<size_t>(i)] = i;
  }
  return PartitionIndex(std::move(map), d);
}

Coalition PartitionIndex::group_image(const Coalition& coordinates) const {
  if (embedded_count() > Coalition::kCapacity) {
    throw std::invalid_argument("group_image needs at most 64 coordinates");
  }
  Coalition groups;
  coordinates.for_each([&](int i) { groups.insert(group_of_[static_cast<size_t>(i)]); });
  return groups;
}

Coalition PartitionIndex::preimage(const Coalition& groups) const {
  if (group_masks_.empty()) {
    throw std::invalid_argument("preimage needs at most 64 coordinates and groups");
  }
  std::uint64_t mask = 0;
  groups.for_each([&](int g) { mask |= group_masks_[static_cast<size_t>(g)]; });
  return Coalition::from_mask(mask);
}

FeatureEmbedding FeatureEmbedding::one_hot(int categories) {
  if (categories < 2) {
    throw std::invalid_argument("one-hot embedding needs at least 2 categories, got " +
                                std::to_string(categories));
  }
  return {Kind::OneHot, categories};
}

int EmbeddingSpec::embedded_count() const {
  int total = 0;
  for (const FeatureEmbedding& f : features) {
    total += f.width();
  }
  return total;
}

PartitionIndex build_index(const EmbeddingSpec& spec) {
  if (spec.features.empty()) {
    throw std::invalid_argument("build_index: empty embedding spec");
  }
  std::vector<int> map;
  map.reserve(static_cast<size_t>(spec.embedded_count()));
  for (size_t feature = 0; feature < spec.features.size(); ++feature) {
    const FeatureEmbedding& f = spec.features[feature];
    if (f.kind == FeatureEmbedding::Kind::OneHot && f.category_count < 2) {
      throw std::invalid_argument("build_index: one-hot entry with fewer than 2 categories");
    }
    for (int k = 0; k < f.width(); ++k) {
      map.push_back(static_cast<int>(feature));
    }
  }
  return PartitionIndex(std::move(map), spec.raw_count());
}

std::vector<double> embed(std::span<const double> raw, const EmbeddingSpec& spec) {
  if (static_cast<int>(raw.size()) != spec.raw_count()) {
    throw std::invalid_argument("embed: input has " + std::to_string(raw.size()) +
                                " features, spec describes " + std::to_string(spec.raw_count()));
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(spec.embedded_count()));
  for (size_t i = 0; i < spec.features.size(); ++i) {
    const FeatureEmbedding& f = spec.features[i];
    const double v = raw[i];
    if (f.kind == FeatureEmbedding::Kind::Identity) {
      out.push_back(v);
      continue;
    }
    if (!std::isfinite(v) || v != std::floor(v)) {
      throw std::invalid_argument("embed: feature " + std::to_string(i) +
                                  " must be an integer category, got a fractional value");
    }
    const auto category = static_cast<long long>(v);
    if (category < 0 || category >= f.category_count) {
      throw std::invalid_argument("embed: feature " + std::to_string(i) + " category " +
                                  std::to_string(category) + " out of range [0, " +
                                  std::to_string(f.category_count) + ")");
    }
    for (int k = 0; k < f.category_count; ++k) {
      out.push_back(k == category ? 1.0 : 0.0);
    }
  }
  return out;
}

namespace {

void check_inputs(const Tree& tree, std::span<const double> x, std::span<const double> z,
                  const PartitionIndex& index) {
  if (index.embedded_count() != tree.feature_count) {
    throw std::invalid_argument("partition index covers " +
                                std::to_string(index.embedded_count()) +
                                " coordinates, model has " +
                                std::to_string(tree.feature_count));
  }
  if (index.group_count() > Coalition::kCapacity) {
    throw std::invalid_argument("explanations support at most " +
                                std::to_string(Coalition::kCapacity) + " groups");
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

void explain_partition_into(const Tree& tree, std::span<const double> x,
                            std::span<const double> z, const PartitionIndex& index,
                            const WeightTable& weights, double* phi) {
  const std::vector<int>& group_of = index.groups();
  detail::traverse(
      tree, x, z,
      [&group_of](int feature) { return group_of[static_cast<size_t>(feature)]; },
      [&](double leaf_value, const PathState& state) {
        detail::add_leaf_scores(leaf_value, state, weights, phi);
      });
}

}  // namespace

AttributionVector explain_partition_tree(const Tree& tree, std::span<const double> x_emb,
                                         std::span<const double> z_emb,
                                         const PartitionIndex& index) {
  const WeightTable weights(index.group_count());
  return explain_partition_tree(tree, x_emb, z_emb, index, weights);
}

AttributionVector explain_partition_tree(const Tree& tree, std::span<const double> x_emb,
                                         std::span<const double> z_emb,
                                         const PartitionIndex& index,
                                         const WeightTable& weights) {
  check_inputs(tree, x_emb, z_emb, index);
  if (weights.max_players() < index.group_count()) {
    throw std::invalid_argument("weight table too small for this partition");
  }
  AttributionVector phi(static_cast<size_t>(index.group_count()), 0.0);
  explain_partition_into(tree, x_emb, z_emb, index, weights, phi.data());
  return phi;
}

AttributionVector explain_partition_forest(const Forest& forest, std::span<const double> x_emb,
                                           std::span<const double> z_emb,
                                           const PartitionIndex& index) {
  const WeightTable weights(index.group_count());
  return explain_partition_forest(forest, x_emb, z_emb, index, weights);
}

AttributionVector explain_partition_forest(const Forest& forest, std::span<const double> x_emb,
                                           std::span<const double> z_emb,
                                           const PartitionIndex& index,
                                           const WeightTable& weights) {
  if (forest.trees.empty()) {
    throw std::invalid_argument("explain_partition_forest: empty forest");
  }
  if (weights.max_players() < index.group_count()) {
    throw std::invalid_argument("weight table too small for this partition");
  }
  AttributionVector phi(static_cast<size_t>(index.group_count()), 0.0);
  for (const Tree& tree : forest.trees) {
    check_inputs(tree, x_emb, z_emb, index);
    explain_partition_into(tree, x_emb, z_emb, index, weights, phi.data());
  }
  if (forest.aggregation == Aggregation::Mean) {
    const auto n = static_cast<double>(forest.trees.size());
    for (double& v : phi) {
      v /= n;
    }
  }
  return phi;
}

}  // namespace treeshap
