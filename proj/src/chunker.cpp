#include "longner/chunker.hpp"

#include <algorithm>
#include <span>

#include "longner/decoder.hpp"
#include "longner/error.hpp"

namespace longner {

WindowPlan plan_windows(std::size_t length, std::size_t window_size, std::size_t stride) {
  if (stride < 1 || stride > window_size) {
    throw Error(ErrorCode::InvalidStride, "stride must satisfy 1 <= S <= W (W=" +
                                              std::to_string(window_size) +
                                              ", S=" + std::to_string(stride) + ")");
  }
  if (length == 0) throw Error(ErrorCode::IndexOutOfRange, "cannot plan windows for length 0");

  WindowPlan plan{window_size, stride, {}};
  if (length <= window_size) {
    plan.windows.push_back({0, length});
    return plan;
  }
  for (std::size_t start = 0; start + window_size < length; start += stride) {
    plan.windows.push_back({start, start + window_size});
  }
  plan.windows.push_back({length - window_size, length});
  return plan;
}

std::vector<Tag> merge_predictions(const WindowPlan& plan,
                                   const std::vector<std::vector<Tag>>& window_tags) {
  if (window_tags.size() != plan.windows.size()) {
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(window_tags.size()) +
                                               " window predictions for " +
                                               std::to_string(plan.windows.size()) + " windows");
  }
  std::size_t length = 0;
  for (std::size_t w = 0; w < plan.windows.size(); ++w) {
    if (window_tags[w].size() != plan.windows[w].size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "window " + std::to_string(w) + " has " + std::to_string(window_tags[w].size()) +
                      " tags, expected " + std::to_string(plan.windows[w].size()));
    }
    length = std::max(length, plan.windows[w].end);
  }

  std::vector<Tag> merged(length);
  std::vector<std::ptrdiff_t> best(length, -1);
  for (std::size_t w = 0; w < plan.windows.size(); ++w) {
    const auto [start, end] = plan.windows[w];
    for (std::size_t idx = start; idx < end; ++idx) {
      const auto depth = static_cast<std::ptrdiff_t>(std::min(idx - start, end - 1 - idx));
      if (depth > best[idx]) {  // strict: earlier window keeps ties
        best[idx] = depth;
        merged[idx] = window_tags[w][idx - start];
      }
    }
  }
  repair_iob(merged);
  return merged;
}

std::vector<Tag> predict_sentence(const TaggerModel& model, const Sentence& sentence,
                                  const ContextPolicy& policy, bool constrain) {
  const auto n = sentence.size();
  auto decode = [&](std::size_t start, std::size_t end) {
    std::span<const std::string> tokens(sentence.tokens.data() + start, end - start);
    std::vector<Tag> tags;
    for (const auto t : viterbi(model, tokens, constrain).path) tags.push_back(model.tags()[t]);
    return tags;
  };

  switch (policy.kind) {
    case ContextPolicy::Kind::full:
      return decode(0, n);
    case ContextPolicy::Kind::truncate: {
      if (policy.window_size == 0) {
        throw Error(ErrorCode::InvalidStride, "truncation length must be positive");
      }
      auto tags = decode(0, std::min(n, policy.window_size));
      tags.resize(n, Tag::outside());
      return tags;
    }
    case ContextPolicy::Kind::window: {
      if (n == 0) return {};
      const auto plan = plan_windows(n, policy.window_size, policy.stride);
      std::vector<std::vector<Tag>> per_window;
      per_window.reserve(plan.windows.size());
      for (const auto& w : plan.windows) per_window.push_back(decode(w.start, w.end));
      return merge_predictions(plan, per_window);
    }
  }
  return {};
}

Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus,
                      const ContextPolicy& policy, bool constrain) {
  if (policy.kind == ContextPolicy::Kind::full) return predict_corpus(model, corpus, constrain);
  if (model.tag_count() == 0) throw Error(ErrorCode::EmptyModel, "model has no tags");
  if (policy.kind == ContextPolicy::Kind::window) {
    plan_windows(1, policy.window_size, policy.stride);  // validate before fanning out
  } else if (policy.window_size == 0) {
    throw Error(ErrorCode::InvalidStride, "truncation length must be positive");
  }

  Corpus out;
  out.sentences.resize(corpus.sentences.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.sentences.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& src = corpus.sentences[static_cast<std::size_t>(i)];
    auto& dst = out.sentences[static_cast<std::size_t>(i)];
    dst = src;
    dst.tags = predict_sentence(model, src, policy, constrain);
  }
  out.refresh_tagset();
  return out;
}

}  // namespace longner
