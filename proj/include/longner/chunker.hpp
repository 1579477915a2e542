#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "longner/corpus.hpp"
#include "longner/model.hpp"

namespace longner {

struct Window {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  std::size_t size() const { return end - start; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct WindowPlan {
  std::size_t window_size = 0;
  std::size_t stride = 0;
  std::vector<Window> windows;
};

// Windows start at 0, S, 2S, ... and the last one is [max(0, length - W), length).
// Throws Error{InvalidStride} unless 1 <= S <= W, and Error{IndexOutOfRange}
// for length 0.
WindowPlan plan_windows(std::size_t length, std::size_t window_size, std::size_t stride);

// Each token takes its tag from the window where it sits farthest from the
// nearer edge; ties go to the earlier window. Orphan I-X become B-X.
// Throws Error{LengthMismatch}.
std::vector<Tag> merge_predictions(const WindowPlan& plan,
                                   const std::vector<std::vector<Tag>>& window_tags);

struct ContextPolicy {
  enum class Kind { full, window, truncate };

  Kind kind = Kind::full;
  std::size_t window_size = 0;
  std::size_t stride = 0;

  static ContextPolicy full() { return {}; }
  static ContextPolicy sliding(std::size_t w, std::size_t s) { return {Kind::window, w, s}; }
  static ContextPolicy truncated(std::size_t w) { return {Kind::truncate, w, w}; }
};

// Decodes each window as an independent sentence. Truncation keeps the first
// W tokens and labels the rest O.
std::vector<Tag> predict_sentence(const TaggerModel& model, const Sentence& sentence,
                                  const ContextPolicy& policy, bool constrain = true);

Corpus predict_corpus(const TaggerModel& model, const Corpus& corpus,
                      const ContextPolicy& policy, bool constrain = true);

}  // namespace longner
