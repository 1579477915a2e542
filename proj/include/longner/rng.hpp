#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace longner {

// splitmix64 with a bit-exact bounded draw and shuffle, so any
// implementation seeded the same way reproduces the same datasets.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Draws at or above the largest multiple of n that fits
  // in 64 bits are rejected. n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
    while (true) {
      const std::uint64_t x = next();
      if (rem == 0 || x < 0 - rem) return x % n;
    }
  }

  // Fisher-Yates, i from size-1 down to 1, swap i with a draw in [0, i].
  template <typename T, std::size_t Extent>
  void shuffle(std::span<T, Extent> items) {
    for (std::size_t i = items.size(); i-- > 1;) {
      const auto j = static_cast<std::size_t>(below(i + 1));
      std::swap(items[i], items[j]);
    }
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// FNV-1a, 64 bit.
std::uint64_t stable_hash(std::string_view text);

// Child seed for a named stream: splitmix64(seed XOR stable_hash(name)).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

}  // namespace longner
