#include "treeshap/game.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "treeshap/partition.hpp"

namespace treeshap {

double InteractionMatrix::total() const {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum;
}

std::vector<double> replace(std::span<const double> x, std::span<const double> z,
                            const Coalition& active) {
  if (x.size() != z.size()) {
    throw std::invalid_argument("replace: vectors have different lengths");
  }
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = active.contains(static_cast<int>(i)) ? x[i] : z[i];
  }
  return out;
}

GameEvaluator interventional_game(std::function<double(std::span<const double>)> model,
                                  std::vector<double> x, std::vector<double> z) {
  if (x.size() != z.size()) {
    throw std::invalid_argument("interventional_game: x and z have different lengths");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(z[i])) {
      throw std::invalid_argument("interventional_game: non-finite input");
    }
  }
  const int d = static_cast<int>(x.size());
  return GameEvaluator{
      d,
      [model = std::move(model), x = std::move(x), z = std::move(z)](const Coalition& s) {
        return model(replace(x, z, s));
      }};
}

GameEvaluator interventional_game(const Tree& tree, std::span<const double> x,
                                  std::span<const double> z) {
  return interventional_game([&tree](std::span<const double> p) { return tree.evaluate(p); },
                             std::vector<double>(x.begin(), x.end()),
                             std::vector<double>(z.begin(), z.end()));
}

GameEvaluator interventional_game(const Forest& forest, std::span<const double> x,
                                  std::span<const double> z) {
  return interventional_game(
      [&forest](std::span<const double> p) { return forest.evaluate(p); },
      std::vector<double>(x.begin(), x.end()), std::vector<double>(z.begin(), z.end()));
}

GameEvaluator grouped_game(GameEvaluator base, const PartitionIndex& index) {
  if (index.embedded_count() != base.player_count) {
    throw std::invalid_argument("grouped_game: index covers " +
                                std::to_string(index.embedded_count()) +
                                " coordinates, game has " +
                                std::to_string(base.player_count) + " players");
  }
  PartitionIndex idx = index;
  return GameEvaluator{idx.group_count(),
                       [base = std::move(base), idx = std::move(idx)](const Coalition& groups) {
                         return base.evaluate(idx.preimage(groups));
                       }};
}

}  // namespace treeshap
