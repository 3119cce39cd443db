#include "treeshap/weights.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace treeshap {

namespace {

// Additive triangle keeps every entry exact: C(63, 31) < 2^63.
std::vector<std::uint64_t> binomial_row(int n) {
  std::vector<std::uint64_t> row(static_cast<size_t>(n) + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int k = m; k >= 1; --k) {
      row[static_cast<size_t>(k)] += row[static_cast<size_t>(k) - 1];
    }
  }
  return row;
}

double weight_from_binomial(int d, std::uint64_t binom) {
  const auto denominator = static_cast<unsigned __int128>(d) * binom;
  return 1.0 / static_cast<double>(denominator);
}

void check_range(int k, int d) {
  if (d < 1 || d > kMaxWeightPlayers || k < 0 || k > d - 1) {
    throw std::invalid_argument("shapley_weight: k=" + std::to_string(k) +
                                ", d=" + std::to_string(d) + " out of range");
  }
}

}  // namespace

double shapley_weight(int k, int d) {
  check_range(k, d);
  return weight_from_binomial(d, binomial_row(d - 1)[static_cast<size_t>(k)]);
}

WeightTable::WeightTable(int max_players) : max_players_(max_players) {
  if (max_players < 1 || max_players > kMaxWeightPlayers) {
    throw std::invalid_argument("WeightTable: max_players " + std::to_string(max_players) +
                                " out of range [1, " + std::to_string(kMaxWeightPlayers) + "]");
  }
  w_.assign(static_cast<size_t>(max_players) * static_cast<size_t>(max_players), 0.0);
  std::vector<std::uint64_t> row{1};  // C(0, 0)
  for (int d = 1; d <= max_players; ++d) {
    for (int k = 0; k <= d - 1; ++k) {
      w_[static_cast<size_t>(d - 1) * static_cast<size_t>(max_players) + static_cast<size_t>(k)] =
          weight_from_binomial(d, row[static_cast<size_t>(k)]);
    }
    // Extend C(d-1, .) to C(d, .) in place.
    row.push_back(0);
    for (int k = d; k >= 1; --k) {
      row[static_cast<size_t>(k)] += row[static_cast<size_t>(k) - 1];
    }
  }
}

double WeightTable::operator()(int k, int d) const {
  check_range(k, d);
  if (d > max_players_) {
    throw std::invalid_argument("WeightTable built for at most " +
                                std::to_string(max_players_) + " players, asked for d=" +
                                std::to_string(d));
  }
  return w_[static_cast<size_t>(d - 1) * static_cast<size_t>(max_players_) +
            static_cast<size_t>(k)];
}

}  // namespace treeshap
