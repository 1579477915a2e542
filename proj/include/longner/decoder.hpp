#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "longner/corpus.hpp"
#include "longner/model.hpp"

namespace longner {

struct DecodeResult {
  std::vector<std::size_t> path;  // tag indices into model.labels()
  double score = 0.0;
};

// Per-position emission scores, row-major [position][tag].
std::vector<double> emission_scores(const TaggerModel& model,
                                    std::span<const std::string> tokens);

// Exact first-order Viterbi. Ties go to the smaller tag index at every
// backpointer and at the final position. With `constrain`, I-X may only
// follow B-X or I-X and never opens the sequence. Throws Error{EmptyModel}.
DecodeResult viterbi(const TaggerModel& model, std::span<const std::string> tokens,
                     bool constrain);

std::vector<Tag> viterbi_decode(const TaggerModel& model, const Sentence& sentence,
                                bool constrain = true);

// Score of a given tag-index path under the model.
double path_score(const TaggerModel& model, std::span<const std::string> tokens,
                  std::span<const std::size_t> path);

// Tags replaced by decoder output; IDs, tokens and provenance kept.
// Sentences are decoded in parallel and written back in input order.
Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus, bool constrain = true);

namespace serial {
Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus, bool constrain = true);
}

}  // namespace longner
