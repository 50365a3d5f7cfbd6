// Counter-based random streams keyed by (seed, purpose label, indices).
//
// Every random draw in the simulator comes from a stream whose key names what
// the draw is for ("full/channel", block 3, attempt 0, ...). Streams are plain
// values: copying one forks it, and two streams with equal keys produce equal
// sequences regardless of what else was drawn before.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace cachedof {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t seed, std::string_view label, std::initializer_list<std::uint64_t> indices = {})
      : key_(detail::splitmix64(seed ^ detail::splitmix64(detail::fnv1a(label)))) {
    for (std::uint64_t i : indices) key_ = detail::splitmix64(key_ ^ detail::splitmix64(i + 0x632be59bd9b4e019ULL));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    return detail::splitmix64(key_ + 0xd1342543de82ef95ULL * ++counter_);
  }

  /// Uniform in [0, bound), rejection-sampled so every residue is equally likely.
  std::uint64_t uniform(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [1, bound).
  std::uint64_t uniform_nonzero(std::uint64_t bound) noexcept { return 1 + uniform(bound - 1); }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cachedof
