#include "treeshap/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeshap/explain.hpp"

namespace treeshap {

namespace {

// One game value per bit pattern; legal because games are deterministic.
std::vector<double> tabulate_game(const GameEvaluator& game) {
  const std::uint64_t subsets = std::uint64_t{1} << game.player_count;
  std::vector<double> value(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    value[mask] = game.evaluate(Coalition::from_mask(mask));
  }
  return value;
}

}  // namespace

AttributionVector brute_force_shapley(const GameEvaluator& game) {
  const int d = game.player_count;
  if (d < 1 || d > kMaxBruteForcePlayers) {
    throw std::invalid_argument("brute_force_shapley: player_count " + std::to_string(d) +
                                " outside [1, " + std::to_string(kMaxBruteForcePlayers) + "]");
  }
  const std::vector<double> value = tabulate_game(game);
  const WeightTable weights(d);
  const std::uint64_t subsets = std::uint64_t{1} << d;

  AttributionVector phi(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) {
        continue;
      }
      const int k = std::popcount(mask);
      sum += weights(k, d) * (value[mask | bit] - value[mask]);
    }
    phi[static_cast<size_t>(i)] = sum;
  }
  return phi;
}

InteractionMatrix brute_force_shapley_taylor(const GameEvaluator& game) {
  const int d = game.player_count;
  if (d < 1 || d > kMaxBruteForceTaylorPlayers) {
    throw std::invalid_argument("brute_force_shapley_taylor: player_count " +
                                std::to_string(d) + " outside [1, " +
                                std::to_string(kMaxBruteForceTaylorPlayers) + "]");
  }
  const std::vector<double> value = tabulate_game(game);
  const WeightTable weights(d);
  const std::uint64_t subsets = std::uint64_t{1} << d;

  InteractionMatrix out(d);
  for (int i = 0; i < d; ++i) {
    out.at(i, i) = value[std::uint64_t{1} << i] - value[0];
  }
  // Computed once per unordered pair and mirrored, so the matrix is exactly
  // symmetric.
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      const std::uint64_t bj = std::uint64_t{1} << j;
      double sum = 0.0;
      for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        if (mask & (bi | bj)) {
          continue;
        }
        const int k = std::popcount(mask);
        const double second_difference =
            value[mask | bi | bj] - value[mask | bj] - value[mask | bi] + value[mask];
        sum += weights(k, d) * second_difference;
      }
      out.at(i, j) = sum;
      out.at(j, i) = sum;
    }
  }
  return out;
}

PathClassification classify_path(const Tree& tree, const MaximalPath& path,
                                 std::span<const double> x, std::span<const double> z) {
  PathClassification result;
  for (const auto& [parent, child] : path.edges) {
    const EdgeType type = classify_edge(tree, parent, child, x, z);
    const int feature = tree.split_feature[static_cast<size_t>(parent)];
    switch (type) {
      case EdgeType::B:
        result.has_blocked = true;
        break;
      case EdgeType::X:
        result.s_x.insert(feature);
        break;
      case EdgeType::Z:
        result.s_z.insert(feature);
        break;
      case EdgeType::F:
        break;
    }
  }
  return result;
}

AttributionVector path_shapley_contribution(const Tree& tree, const MaximalPath& path,
                                            std::span<const double> x,
                                            std::span<const double> z,
                                            const WeightTable& weights) {
  AttributionVector phi(static_cast<size_t>(tree.feature_count), 0.0);
  const PathClassification cls = classify_path(tree, path, x, z);
  if (cls.has_blocked || cls.s_x.intersects(cls.s_z)) {
    return phi;
  }

  int members[Coalition::kCapacity];
  int member_count = 0;
  cls.s_x.united(cls.s_z).for_each([&](int f) { members[member_count++] = f; });
  if (member_count == 0) {
    return phi;  // constant game, every feature is a dummy
  }
  if (member_count > kMaxBruteForcePlayers) {
    throw std::invalid_argument("path collects " + std::to_string(member_count) +
                                " features, enumeration guard is " +
                                std::to_string(kMaxBruteForcePlayers));
  }

  // Features outside the collected sets never change the stump value, so the
  // sum runs over subsets of the collected features only.
  const std::uint64_t subsets = std::uint64_t{1} << member_count;
  for (int a = 0; a < member_count; ++a) {
    const int i = members[a];
    double sum = 0.0;
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      if (mask & (std::uint64_t{1} << a)) {
        continue;
      }
      Coalition s;
      for (int b = 0; b < member_count; ++b) {
        if (mask & (std::uint64_t{1} << b)) {
          s.insert(members[b]);
        }
      }
      const double without = evaluate_path_stump(tree, path, replace(x, z, s));
      const double with = evaluate_path_stump(tree, path, replace(x, z, s.with(i)));
      sum += weights(std::popcount(mask), member_count) * (with - without);
    }
    phi[static_cast<size_t>(i)] += sum;
  }
  return phi;
}

AttributionVector naive_path_shapley(const Tree& tree, std::span<const double> x,
                                     std::span<const double> z) {
  const WeightTable weights(std::min(tree.feature_count, kMaxWeightPlayers));
  AttributionVector phi(static_cast<size_t>(tree.feature_count), 0.0);
  for (const MaximalPath& path : enumerate_maximal_paths(tree)) {
    const AttributionVector part = path_shapley_contribution(tree, path, x, z, weights);
    for (size_t i = 0; i < phi.size(); ++i) {
      phi[i] += part[i];
    }
  }
  return phi;
}

}  // namespace treeshap
