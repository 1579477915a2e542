#include "longner/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "longner/utf8.hpp"

namespace longner {
namespace {

std::size_t char_length(const Sentence& s) {
  std::size_t n = s.tokens.empty() ? 0 : s.tokens.size() - 1;
  for (const auto& t : s.tokens) n += utf8::scalar_count(t);
  return n;
}

LengthSummary summarize(const std::vector<std::size_t>& lengths) {
  if (lengths.empty()) return {};
  LengthSummary out{std::numeric_limits<std::size_t>::max(), 0, 0.0};
  std::size_t total = 0;
  for (auto n : lengths) {
    out.min = std::min(out.min, n);
    out.max = std::max(out.max, n);
    total += n;
  }
  out.mean = static_cast<double>(total) / static_cast<double>(lengths.size());
  return out;
}

StatsReport finish(std::map<std::string, std::size_t> labels,
                   const std::vector<std::size_t>& token_lengths,
                   const std::vector<std::size_t>& char_lengths) {
  StatsReport r;
  r.per_label_counts = std::move(labels);
  r.sentence_count = token_lengths.size();
  for (auto n : token_lengths) {
    r.token_count += n;
    ++r.length_histogram[n / r.bucket_width * r.bucket_width];
  }
  r.tokens = summarize(token_lengths);
  r.characters = summarize(char_lengths);
  return r;
}

}  // namespace

namespace serial {

StatsReport corpus_stats(const Corpus& corpus, LabelStyle style) {
  std::map<std::string, std::size_t> labels;
  std::vector<std::size_t> tok, chr;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tags) ++labels[format_tag(t, style)];
    tok.push_back(s.size());
    chr.push_back(char_length(s));
  }
  return finish(std::move(labels), tok, chr);
}

}  // namespace serial

StatsReport corpus_stats(const Corpus& corpus, LabelStyle style) {
  const auto n = static_cast<std::ptrdiff_t>(corpus.sentences.size());
  std::vector<std::size_t> tok(corpus.sentences.size()), chr(corpus.sentences.size());
  std::map<std::string, std::size_t> labels;

#pragma omp parallel
  {
    std::map<std::string, std::size_t> local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& s = corpus.sentences[static_cast<std::size_t>(i)];
      for (const auto& t : s.tags) ++local[format_tag(t, style)];
      tok[static_cast<std::size_t>(i)] = s.size();
      chr[static_cast<std::size_t>(i)] = char_length(s);
    }
    // integer sums commute, so merge order does not matter
#pragma omp critical(longner_stats_merge)
    for (const auto& [label, count] : local) labels[label] += count;
  }
  return finish(std::move(labels), tok, chr);
}

std::string stats_to_json(const StatsReport& r) {
  nlohmann::ordered_json j;
  j["sentence_count"] = r.sentence_count;
  j["token_count"] = r.token_count;
  nlohmann::ordered_json labels = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.per_label_counts) labels[k] = v;
  j["per_label_counts"] = labels;
  j["length_tokens"] = {{"min", r.tokens.min}, {"max", r.tokens.max}, {"mean", r.tokens.mean}};
  j["length_characters"] = {
      {"min", r.characters.min}, {"max", r.characters.max}, {"mean", r.characters.mean}};
  j["histogram_bucket_width"] = r.bucket_width;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.length_histogram) hist[std::to_string(k)] = v;
  j["length_histogram"] = hist;
  return j.dump(2) + "\n";
}

std::string stats_to_table(const StatsReport& r) {
  std::ostringstream out;
  char buf[128];
  out << "sentences  " << r.sentence_count << "\n";
  out << "tokens     " << r.token_count << "\n";
  std::snprintf(buf, sizeof buf, "length (tokens)     min %zu  max %zu  mean %.2f\n",
                r.tokens.min, r.tokens.max, r.tokens.mean);
  out << buf;
  std::snprintf(buf, sizeof buf, "length (characters) min %zu  max %zu  mean %.2f\n",
                r.characters.min, r.characters.max, r.characters.mean);
  out << buf;

  // descending by count, the way the label tables are usually read
  std::vector<std::pair<std::string, std::size_t>> rows(r.per_label_counts.begin(),
                                                        r.per_label_counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out << "\nlabel      count\n";
  for (const auto& [label, count] : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %zu\n", label.c_str(), count);
    out << buf;
  }
  out << "\nlength bucket  sentences\n";
  for (const auto& [start, count] : r.length_histogram) {
    std::snprintf(buf, sizeof buf, "%4zu-%-4zu      %zu\n", start, start + r.bucket_width - 1,
                  count);
    out << buf;
  }
  return out.str();
}

}  // namespace longner
