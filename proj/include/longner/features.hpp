#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "longner/corpus.hpp"

namespace longner {

// Bumped whenever the templates below change; part of the model header.
inline constexpr int kFeatureTemplateVersion = 1;

// bias, w=, prev=, next= (with <s> / </s> at the edges), pre1..pre4= and
// suf1..suf4= over Unicode scalars, and shape:digit / shape:latin /
// shape:deva when the word contains such a character.
std::vector<std::string> extract_features(std::span<const std::string> tokens,
                                          std::size_t index);

// Throws Error{IndexOutOfRange}.
std::vector<std::string> extract_features(const Sentence& sentence, std::size_t index);

}  // namespace longner
