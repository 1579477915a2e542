#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "longner/corpus.hpp"

namespace longner {

enum class Scheme { original, concat2, concat3, concat_similar, combined };

std::string_view scheme_name(Scheme scheme);     // "concat_similar"
std::string_view scheme_display(Scheme scheme);  // "Concat-similar"
Scheme parse_scheme(std::string_view name);      // accepts '-' or '_'

struct SynthesisResult {
  Corpus corpus;
  // Input sentence IDs left over by the partition, in shuffled order.
  std::vector<SentenceId> unused;
};

// Shuffles the sentence order, cuts it into consecutive groups of k and
// concatenates each group. Throws InvalidK (k < 2) or TooFewSentences.
SynthesisResult concat_k(const Corpus& corpus, int k, std::uint64_t seed,
                         bool allow_remainder = false);

// Shuffles, takes consecutive triples, duplicates one member (uniform draw
// over 3) and orders the four parts by a shuffle. Throws TooFewSentences.
SynthesisResult concat_similar(const Corpus& corpus, std::uint64_t seed);

// Concatenates in order and renumbers IDs 0..N-1. Throws EmptyList.
Corpus combine(std::span<const Corpus> corpora);

struct SynthesisConfig {
  Scheme scheme = Scheme::concat2;
  int k = 0;  // 0: use the scheme's own group size
  std::uint64_t seed = 0;
  bool allow_remainder = false;
  // Combined = original + concat2 + concat3, optionally + concat_similar.
  bool combined_with_similar = false;
};

// Dispatches on the scheme. `original` returns the corpus unchanged.
// Components of `combined` draw from derive_seed(seed, component name).
SynthesisResult synthesize(const Corpus& corpus, const SynthesisConfig& config);

// Sidecar: "<new id>\t<id>,<id>,...\n" per sentence.
std::string serialize_provenance(const Corpus& corpus);
void write_provenance(const std::filesystem::path& path, const Corpus& corpus);

}  // namespace longner
