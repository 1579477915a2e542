#include "longner/decoder.hpp"

#include <limits>

#include "longner/error.hpp"
#include "longner/features.hpp"

namespace longner {
namespace {

constexpr double kForbidden = -std::numeric_limits<double>::infinity();

Sentence relabel(const TaggerModel& model, const Sentence& sentence, bool constrain) {
  Sentence out = sentence;
  out.tags = viterbi_decode(model, sentence, constrain);
  return out;
}

}  // namespace

std::vector<double> emission_scores(const TaggerModel& model,
                                    std::span<const std::string> tokens) {
  const auto k = model.tag_count();
  std::vector<double> scores(tokens.size() * k, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double* row = scores.data() + i * k;
    for (const auto& f : extract_features(tokens, i)) {
      if (const auto* w = model.emission(f)) {
        for (std::size_t t = 0; t < k; ++t) row[t] += (*w)[t];
      }
    }
  }
  return scores;
}

DecodeResult viterbi(const TaggerModel& model, std::span<const std::string> tokens,
                     bool constrain) {
  const auto k = model.tag_count();
  if (k == 0) throw Error(ErrorCode::EmptyModel, "model has no tags");
  const auto n = tokens.size();
  if (n == 0) return {};

  const auto& tags = model.tags();
  const auto emit = emission_scores(model, tokens);
  std::vector<double> best(n * k, kForbidden);
  std::vector<std::size_t> back(n * k, 0);

  for (std::size_t t = 0; t < k; ++t) {
    if (!constrain || iob_allows(nullptr, tags[t])) best[t] = emit[t];
  }
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      double top = kForbidden;
      std::size_t arg = 0;
      for (std::size_t p = 0; p < k; ++p) {
        const double prev = best[(i - 1) * k + p];
        if (prev == kForbidden) continue;
        if (constrain && !iob_allows(&tags[p], tags[t])) continue;
        const double s = prev + model.transition(p, t);
        if (s > top) {  // strict: earlier (smaller) tag keeps ties
          top = s;
          arg = p;
        }
      }
      if (top != kForbidden) {
        best[i * k + t] = top + emit[i * k + t];
        back[i * k + t] = arg;
      }
    }
  }

  DecodeResult result;
  result.path.assign(n, 0);
  double top = kForbidden;
  for (std::size_t t = 0; t < k; ++t) {
    if (best[(n - 1) * k + t] > top) {
      top = best[(n - 1) * k + t];
      result.path[n - 1] = t;
    }
  }
  result.score = top;
  for (std::size_t i = n - 1; i > 0; --i) {
    result.path[i - 1] = back[i * k + result.path[i]];
  }
  return result;
}

std::vector<Tag> viterbi_decode(const TaggerModel& model, const Sentence& sentence,
                                bool constrain) {
  const auto decoded = viterbi(model, sentence.tokens, constrain);
  std::vector<Tag> out;
  out.reserve(decoded.path.size());
  for (const auto t : decoded.path) out.push_back(model.tags()[t]);
  return out;
}

double path_score(const TaggerModel& model, std::span<const std::string> tokens,
                  std::span<const std::size_t> path) {
  const auto k = model.tag_count();
  const auto emit = emission_scores(model, tokens);
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += emit[i * k + path[i]];
    if (i > 0) s += model.transition(path[i - 1], path[i]);
  }
  return s;
}

namespace serial {

Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus, bool constrain) {
  Corpus out;
  out.sentences.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) out.sentences.push_back(relabel(model, s, constrain));
  out.refresh_tagset();
  return out;
}

}  // namespace serial

Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus, bool constrain) {
  if (model.tag_count() == 0) throw Error(ErrorCode::EmptyModel, "model has no tags");
  Corpus out;
  out.sentences.resize(corpus.sentences.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.sentences.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.sentences[idx] = relabel(model, corpus.sentences[idx], constrain);
  }
  out.refresh_tagset();
  return out;
}

}  // namespace longner
