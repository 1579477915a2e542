#include "longner/rng.hpp"

namespace longner {

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  return SplitMix64(seed ^ stable_hash(name)).next();
}

}  // namespace longner
