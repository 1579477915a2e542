#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "longner/corpus.hpp"

namespace longner {

// Token range [start, end], both inclusive.
struct EntitySpan {
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const EntitySpan&, const EntitySpan&) = default;
};

enum class SpanMode { strict, lenient };

SpanMode parse_span_mode(std::string_view name);

struct SpanExtraction {
  std::vector<EntitySpan> spans;
  // Positions of orphan I-X tags; only filled in strict mode.
  std::vector<std::size_t> violations;
};

// A span opens at B-X (or at an orphan I-X) and runs through the following
// I-X of the same type.
SpanExtraction extract_spans(std::span<const Tag> tags, SpanMode mode = SpanMode::lenient);

struct TypeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched = 0;
  std::size_t gold_support = 0;
  std::size_t pred_support = 0;

  friend bool operator==(const TypeScores&, const TypeScores&) = default;
};

struct EvalReport {
  std::map<std::string, TypeScores> per_type;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  // unweighted mean over every type seen in gold or predictions
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::size_t matched = 0;
  std::size_t gold_total = 0;
  std::size_t pred_total = 0;
  std::size_t gold_violations = 0;
  std::size_t pred_violations = 0;
  SpanMode mode = SpanMode::lenient;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// P = matched / predicted, R = matched / gold, F1 = 2PR / (P + R); each is 0
// when its denominator is 0.
TypeScores score_counts(std::size_t matched, std::size_t gold, std::size_t pred);

// Exact (type, start, end) matching within each sentence. Throws
// Error{Misaligned} naming the first sentence whose ID or tokens differ.
EvalReport evaluate(const Corpus& gold, const Corpus& pred, SpanMode mode = SpanMode::lenient);

namespace serial {
EvalReport evaluate(const Corpus& gold, const Corpus& pred, SpanMode mode = SpanMode::lenient);
}

// Fraction of tokens whose labels agree; 1.0 for an empty corpus.
double token_accuracy(const Corpus& gold, const Corpus& pred);

void check_alignment(const Corpus& gold, const Corpus& pred);

std::string format_percent(double fraction);  // 0.84192 -> "84.19"

std::string eval_to_json(const EvalReport& report);
std::string eval_to_table(const EvalReport& report);

}  // namespace longner
