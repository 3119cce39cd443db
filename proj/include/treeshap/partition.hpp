#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treeshap/coalition.hpp"
#include "treeshap/game.hpp"
#include "treeshap/tree.hpp"
#include "treeshap/weights.hpp"

namespace treeshap {

// Surjective map from embedded coordinates [d'] to group indices [d].
// Groups need not be contiguous blocks.
class PartitionIndex {
 public:
  PartitionIndex() = default;

  // Validates range and surjectivity.
  PartitionIndex(std::vector<int> group_of, int group_count);

  static PartitionIndex identity(int d);

  int group_count() const { return group_count_; }
  int embedded_count() const { return static_cast<int>(group_of_.size()); }
  int group_of(int embedded_index) const { return group_of_[static_cast<size_t>(embedded_index)]; }
  const std::vector<int>& groups() const { return group_of_; }

  // Image of a set of embedded coordinates (embedded_count <= 64 only).
  Coalition group_image(const Coalition& coordinates) const;

  // All coordinates whose group lies in the given set (embedded_count <= 64 only).
  Coalition preimage(const Coalition& groups) const;

 private:
  std::vector<int> group_of_;
  int group_count_ = 0;
  std::vector<std::uint64_t> group_masks_;  // built when embedded_count <= 64
};

// Per-feature embedding: numeric features pass through, categorical features
// expand to one-hot indicator blocks.
struct FeatureEmbedding {
  enum class Kind { Identity, OneHot };

  Kind kind = Kind::Identity;
  int category_count = 1;

  static FeatureEmbedding identity() { return {Kind::Identity, 1}; }
  static FeatureEmbedding one_hot(int categories);  // throws if categories < 2
  int width() const { return kind == Kind::OneHot ? category_count : 1; }
};

struct EmbeddingSpec {
  std::vector<FeatureEmbedding> features;

  int raw_count() const { return static_cast<int>(features.size()); }
  int embedded_count() const;
};

// Contiguous block partition induced by the embedding widths: coordinate i
// belongs to the first feature j with i < d_0 + ... + d_j.
PartitionIndex build_index(const EmbeddingSpec& spec);

// Concatenated per-feature embeddings. Categorical entries must be integers
// in [0, category_count).
std::vector<double> embed(std::span<const double> raw, const EmbeddingSpec& spec);

// Group-level scores for a tree over embedded inputs: the traversal is keyed
// on groups instead of raw coordinates, so coordinates sharing a group are
// credited jointly. With the identity index this coincides with explain_tree
// bit for bit.
AttributionVector explain_partition_tree(const Tree& tree, std::span<const double> x_emb,
                                         std::span<const double> z_emb,
                                         const PartitionIndex& index);
AttributionVector explain_partition_tree(const Tree& tree, std::span<const double> x_emb,
                                         std::span<const double> z_emb,
                                         const PartitionIndex& index,
                                         const WeightTable& weights);
AttributionVector explain_partition_forest(const Forest& forest, std::span<const double> x_emb,
                                           std::span<const double> z_emb,
                                           const PartitionIndex& index);
AttributionVector explain_partition_forest(const Forest& forest, std::span<const double> x_emb,
                                           std::span<const double> z_emb,
                                           const PartitionIndex& index,
                                           const WeightTable& weights);

}  // namespace treeshap
