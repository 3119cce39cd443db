#pragma once

#include <bit>
#include <cstdint>

namespace treeshap {

// Set of player indices 0..63 with cached cardinality. One machine word is
// enough everywhere: explanations are capped at 64 features (or feature
// groups) and the exponential oracles guard far below that.
class Coalition {
 public:
  static constexpr int kCapacity = 64;

  constexpr Coalition() = default;

  static constexpr Coalition from_mask(std::uint64_t mask) {
    Coalition c;
    c.bits_ = mask;
    c.card_ = std::popcount(mask);
    return c;
  }

  static constexpr Coalition full(int player_count) {
    return from_mask(player_count >= kCapacity
                         ? ~std::uint64_t{0}
                         : (std::uint64_t{1} << player_count) - 1);
  }

  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int cardinality() const { return card_; }
  constexpr std::uint64_t mask() const { return bits_; }

  // Callers must keep indices in [0, 64).
  constexpr void insert(int i) {
    if (!contains(i)) {
      bits_ |= std::uint64_t{1} << i;
      ++card_;
    }
  }

  constexpr void erase(int i) {
    if (contains(i)) {
      bits_ &= ~(std::uint64_t{1} << i);
      --card_;
    }
  }

  constexpr Coalition with(int i) const {
    Coalition c = *this;
    c.insert(i);
    return c;
  }

  constexpr Coalition without(int i) const {
    Coalition c = *this;
    c.erase(i);
    return c;
  }

  constexpr bool intersects(const Coalition& other) const {
    return (bits_ & other.bits_) != 0;
  }

  constexpr Coalition united(const Coalition& other) const {
    return from_mask(bits_ | other.bits_);
  }

  // Visits members in ascending index order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
      fn(std::countr_zero(rest));
    }
  }

  friend constexpr bool operator==(const Coalition&, const Coalition&) = default;

 private:
  std::uint64_t bits_ = 0;
  int card_ = 0;
};

}  // namespace treeshap
