#pragma once

#include <vector>

namespace treeshap {

inline constexpr int kMaxWeightPlayers = 64;

// Shapley ordering weight W(k, d) = k! (d-k-1)! / d!: the fraction of the d!
// player orderings in which a fixed size-k coalition comes first, immediately
// followed by a distinguished player. Evaluated as 1 / (d * C(d-1, k)) from
// exact integer binomials, so no factorial is ever formed.
double shapley_weight(int k, int d);

// Dense (k, d) weight table for d up to max_players, built once per
// explanation session.
class WeightTable {
 public:
  explicit WeightTable(int max_players);

  double operator()(int k, int d) const;
  int max_players() const { return max_players_; }

 private:
  int max_players_ = 0;
  std::vector<double> w_;  // (d - 1) * max_players_ + k
};

}  // namespace treeshap
