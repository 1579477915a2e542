#include "longner/features.hpp"

#include "longner/error.hpp"
#include "longner/utf8.hpp"

namespace longner {

std::vector<std::string> extract_features(std::span<const std::string> tokens,
                                          std::size_t index) {
  if (index >= tokens.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "feature index " + std::to_string(index) +
                                                " out of range for length " +
                                                std::to_string(tokens.size()));
  }
  const std::string& word = tokens[index];
  std::vector<std::string> f;
  f.reserve(16);
  f.emplace_back("bias");
  f.push_back("w=" + word);
  f.push_back("prev=" + (index == 0 ? std::string("<s>") : tokens[index - 1]));
  f.push_back("next=" + (index + 1 == tokens.size() ? std::string("</s>") : tokens[index + 1]));

  const auto cuts = utf8::boundaries(word);
  const std::size_t scalars = cuts.size() - 1;
  for (std::size_t n = 1; n <= 4 && n <= scalars; ++n) {
    f.push_back("pre" + std::to_string(n) + "=" + word.substr(0, cuts[n]));
  }
  for (std::size_t n = 1; n <= 4 && n <= scalars; ++n) {
    f.push_back("suf" + std::to_string(n) + "=" + word.substr(cuts[scalars - n]));
  }

  bool digit = false, latin = false, deva = false;
  std::size_t pos = 0;
  while (pos < word.size()) {
    const auto c = utf8::decode_next(word, pos);
    if (!c) {
      ++pos;
      continue;
    }
    digit |= utf8::is_digit(*c);
    latin |= utf8::is_latin(*c);
    deva |= utf8::is_devanagari(*c);
  }
  if (digit) f.emplace_back("shape:digit");
  if (latin) f.emplace_back("shape:latin");
  if (deva) f.emplace_back("shape:deva");
  return f;
}

std::vector<std::string> extract_features(const Sentence& sentence, std::size_t index) {
  return extract_features(std::span<const std::string>(sentence.tokens), index);
}

}  // namespace longner
