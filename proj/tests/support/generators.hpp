#pragma once

// Seeded random inputs for the property tests. Uses std::mt19937_64 rather
// than the library's SplitMix64 so generation never shares code with the
// code under test.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "longner/corpus.hpp"

namespace longner::testing {

inline const std::vector<std::string>& entity_types() {
  static const std::vector<std::string> types{"NEP", "NEL", "NEO", "NEM", "NED", "NETI", "ED"};
  return types;
}

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words{
      "राम", "गेला", "पुणे", "शहर", "मोठे", "आज", "सोमवार", "१९४७", "मुंबई",
      "भारत", "ने", "आणि", ",", "IPL", "2023", "x,y", "\"q\"", "महाराष्ट्रातील"};
  return words;
}

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// IOB-valid by construction: I-X only ever continues an open X.
inline std::vector<Tag> random_valid_tags(std::mt19937_64& rng, std::size_t n,
                                          std::size_t type_count = 7) {
  std::vector<Tag> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const auto roll = uniform(rng, 0, 9);
    if (!tags.empty() && !tags.back().is_outside() && roll < 3) {
      tags.push_back(Tag::inside(tags.back().type));
    } else if (roll < 6) {
      tags.push_back(Tag::outside());
    } else {
      tags.push_back(Tag::begin(entity_types()[uniform(rng, 0, type_count - 1)]));
    }
  }
  return tags;
}

// Any mix of O / B-X / I-X, orphans included.
inline std::vector<Tag> random_any_tags(std::mt19937_64& rng, std::size_t n,
                                        std::size_t type_count = 3) {
  std::vector<Tag> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const auto type = entity_types()[uniform(rng, 0, type_count - 1)];
    switch (uniform(rng, 0, 2)) {
      case 0: tags.push_back(Tag::outside()); break;
      case 1: tags.push_back(Tag::begin(type)); break;
      default: tags.push_back(Tag::inside(type)); break;
    }
  }
  return tags;
}

struct CorpusShape {
  std::size_t min_sentences = 0;
  std::size_t max_sentences = 8;
  std::size_t min_length = 1;
  std::size_t max_length = 10;
  bool sequential_ids = false;
};

inline Corpus random_corpus(std::mt19937_64& rng, const CorpusShape& shape = {}) {
  Corpus c;
  const auto n = uniform(rng, shape.min_sentences, shape.max_sentences);
  std::vector<SentenceId> ids;
  while (ids.size() < n) {
    const SentenceId id = shape.sequential_ids ? ids.size() : uniform(rng, 0, 1000);
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  for (const auto id : ids) {
    Sentence s;
    s.id = id;
    const auto len = uniform(rng, shape.min_length, shape.max_length);
    for (std::size_t i = 0; i < len; ++i) {
      s.tokens.push_back(vocabulary()[uniform(rng, 0, vocabulary().size() - 1)]);
    }
    s.tags = random_valid_tags(rng, len);
    c.sentences.push_back(std::move(s));
  }
  c.refresh_tagset();
  return c;
}

// Tags are a fixed function of the token: per entity type one opener word
// and one continuation word, plus plain O words. Sentences are IOB-valid.
struct SeparableLanguage {
  std::vector<std::string> types;
  std::vector<std::string> outside_words;

  std::string opener(std::size_t t) const { return "b" + types[t]; }
  std::string inner(std::size_t t) const { return "i" + types[t]; }

  Tag tag_of(const std::string& word) const {
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (word == opener(t)) return Tag::begin(types[t]);
      if (word == inner(t)) return Tag::inside(types[t]);
    }
    return Tag::outside();
  }

  std::size_t vocabulary_size() const { return 2 * types.size() + outside_words.size(); }
};

inline SeparableLanguage separable_language(std::size_t type_count, std::size_t outside_count) {
  SeparableLanguage lang;
  for (std::size_t t = 0; t < type_count; ++t) lang.types.push_back(entity_types()[t]);
  for (std::size_t w = 0; w < outside_count; ++w) lang.outside_words.push_back("o" + std::to_string(w));
  return lang;
}

inline Sentence separable_sentence(std::mt19937_64& rng, const SeparableLanguage& lang,
                                   std::size_t min_len, std::size_t max_len) {
  Sentence s;
  const auto target = uniform(rng, min_len, max_len);
  while (s.tokens.size() < target) {
    if (uniform(rng, 0, 3) == 0 && s.tokens.size() + 1 < target) {
      const auto t = uniform(rng, 0, lang.types.size() - 1);
      s.tokens.push_back(lang.opener(t));
      const auto inner = std::min(uniform(rng, 0, 2), target - s.tokens.size());
      for (std::size_t i = 0; i < inner; ++i) s.tokens.push_back(lang.inner(t));
    } else {
      s.tokens.push_back(lang.outside_words[uniform(rng, 0, lang.outside_words.size() - 1)]);
    }
  }
  for (const auto& w : s.tokens) s.tags.push_back(lang.tag_of(w));
  return s;
}

inline Corpus separable_corpus(std::mt19937_64& rng, const SeparableLanguage& lang,
                               std::size_t sentences, std::size_t min_len, std::size_t max_len) {
  Corpus c;
  for (std::size_t i = 0; i < sentences; ++i) {
    c.sentences.push_back(separable_sentence(rng, lang, min_len, max_len));
    c.sentences.back().id = i;
  }
  c.refresh_tagset();
  return c;
}

}  // namespace longner::testing
