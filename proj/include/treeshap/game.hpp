#pragma once

#include <functional>
#include <span>
#include <vector>

#include "treeshap/coalition.hpp"
#include "treeshap/tree.hpp"

namespace treeshap {

class PartitionIndex;

// Per-feature (or per-group) scores.
using AttributionVector = std::vector<double>;

// Dense d x d pairwise scores, row-major.
struct InteractionMatrix {
  int size = 0;
  std::vector<double> values;

  InteractionMatrix() = default;
  explicit InteractionMatrix(int d)
      : size(d), values(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0) {}

  double& at(int i, int j) { return values[static_cast<size_t>(i) * size + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * size + j]; }
  double total() const;
};

// A coalitional game: a deterministic payoff for every subset of players.
struct GameEvaluator {
  int player_count = 0;
  std::function<double(const Coalition&)> evaluate;
};

// Component-wise splice: x where active, z elsewhere.
std::vector<double> replace(std::span<const double> x, std::span<const double> z,
                            const Coalition& active);

// The game whose payoff for S is the model evaluated at replace(x, z, S).
GameEvaluator interventional_game(std::function<double(std::span<const double>)> model,
                                  std::vector<double> x, std::vector<double> z);
GameEvaluator interventional_game(const Tree& tree, std::span<const double> x,
                                  std::span<const double> z);
GameEvaluator interventional_game(const Forest& forest, std::span<const double> x,
                                  std::span<const double> z);

// Game over feature groups: a group coalition's payoff is the base game's
// payoff with every member feature of the selected groups active.
GameEvaluator grouped_game(GameEvaluator base, const PartitionIndex& index);

}  // namespace treeshap
