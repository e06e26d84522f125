#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace fta {

/// Subset of an automaton's states, indexed by dense state index 0..63.
class StateSet {
 public:
  static constexpr std::size_t kCapacity = 64;

  constexpr StateSet() = default;
  constexpr explicit StateSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr StateSet singleton(std::size_t index) { return StateSet{std::uint64_t{1} << index}; }
  static constexpr StateSet full(std::size_t count) {
    return StateSet{count >= kCapacity ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1};
  }

  constexpr bool contains(std::size_t index) const { return (bits_ >> index) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr void insert(std::size_t index) { bits_ |= std::uint64_t{1} << index; }
  constexpr void erase(std::size_t index) { bits_ &= ~(std::uint64_t{1} << index); }

  constexpr bool is_subset_of(StateSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(StateSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr StateSet& operator|=(StateSet other) {
    bits_ |= other.bits_;
    return *this;
  }
  constexpr StateSet& operator&=(StateSet other) {
    bits_ &= other.bits_;
    return *this;
  }
  friend constexpr StateSet operator|(StateSet a, StateSet b) { return StateSet{a.bits_ | b.bits_}; }
  friend constexpr StateSet operator&(StateSet a, StateSet b) { return StateSet{a.bits_ & b.bits_}; }

  friend constexpr bool operator==(StateSet, StateSet) = default;
  friend constexpr auto operator<=>(StateSet, StateSet) = default;

  /// Calls f(index) for each member in increasing order.
  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
      f(static_cast<std::size_t>(std::countr_zero(rest)));
    }
  }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace fta

template <>
struct std::hash<fta::StateSet> {
  std::size_t operator()(fta::StateSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
