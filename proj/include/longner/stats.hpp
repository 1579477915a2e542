#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "longner/corpus.hpp"

namespace longner {

struct LengthSummary {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;

  friend bool operator==(const LengthSummary&, const LengthSummary&) = default;
};

struct StatsReport {
  std::map<std::string, std::size_t> per_label_counts;
  std::size_t sentence_count = 0;
  std::size_t token_count = 0;
  LengthSummary tokens;      // sentence length in tokens
  LengthSummary characters;  // Unicode scalars of the space-joined sentence
  std::size_t bucket_width = 10;
  std::map<std::size_t, std::size_t> length_histogram;  // bucket start -> sentences

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

// Labels are keyed in `style`; paper_raw gives the "BNEM" form.
StatsReport corpus_stats(const Corpus& corpus, LabelStyle style = LabelStyle::paper_raw);

namespace serial {
StatsReport corpus_stats(const Corpus& corpus, LabelStyle style = LabelStyle::paper_raw);
}

std::string stats_to_json(const StatsReport& report);
std::string stats_to_table(const StatsReport& report);

}  // namespace longner
