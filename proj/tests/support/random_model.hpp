#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "longner/features.hpp"
#include "longner/model.hpp"

namespace longner::testing {

// Weights only on features the given tokens produce. Integer weights make
// ties common, which exercises the tie-break rule.
inline TaggerModel random_model(std::mt19937_64& rng, const std::vector<std::string>& tokens,
                         std::size_t tag_count, bool integer_weights) {
  std::vector<std::string> pool{"B-NEP", "I-NEP", "B-NEL", "I-NEL", "B-ED", "I-ED"};
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(tag_count - 1);  // "O" is always added
  TaggerModel m(pool);
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  auto draw = [&] { return integer_weights ? static_cast<double>(small(rng)) : real(rng); };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& f : extract_features(std::span<const std::string>(tokens), i)) {
      if (rng() % 3 == 0) continue;  // leave some features unseen
      auto& row = m.emission_row(f);
      for (auto& w : row) w = draw();
    }
  }
  for (std::size_t p = 0; p < m.tag_count(); ++p) {
    for (std::size_t n = 0; n < m.tag_count(); ++n) m.transition(p, n) = draw();
  }
  return m;
}

}  // namespace longner::testing
