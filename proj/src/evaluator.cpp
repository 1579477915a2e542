#include "longner/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "longner/error.hpp"

namespace longner {
namespace {

// matched, gold, predicted per type
using TypeCounts = std::map<std::string, std::array<std::size_t, 3>>;

struct SentenceCounts {
  TypeCounts counts;
  std::size_t gold_violations = 0;
  std::size_t pred_violations = 0;
};

SentenceCounts count_sentence(const Sentence& gold, const Sentence& pred, SpanMode mode) {
  SentenceCounts out;
  const auto g = extract_spans(gold.tags, mode);
  const auto p = extract_spans(pred.tags, mode);
  out.gold_violations = g.violations.size();
  out.pred_violations = p.violations.size();
  for (const auto& s : g.spans) ++out.counts[s.type][1];
  for (const auto& s : p.spans) ++out.counts[s.type][2];
  // spans come out sorted by start and never overlap, so a merge walk finds
  // every identical pair exactly once
  std::size_t i = 0, j = 0;
  while (i < g.spans.size() && j < p.spans.size()) {
    if (g.spans[i] == p.spans[j]) {
      ++out.counts[g.spans[i].type][0];
      ++i;
      ++j;
    } else if (std::tie(g.spans[i].start, g.spans[i].end, g.spans[i].type) <
               std::tie(p.spans[j].start, p.spans[j].end, p.spans[j].type)) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

void check_sentence(const Sentence& g, const Sentence& p, std::size_t index) {
  const auto where = "sentence #" + std::to_string(index) + " (gold id " +
                     std::to_string(g.id) + ")";
  if (g.id != p.id) {
    throw Error(ErrorCode::Misaligned,
                where + ": prediction has id " + std::to_string(p.id));
  }
  if (g.tokens.size() != p.tokens.size() || g.tags.size() != p.tags.size()) {
    throw Error(ErrorCode::Misaligned, where + ": token counts differ");
  }
  for (std::size_t t = 0; t < g.tokens.size(); ++t) {
    if (g.tokens[t] != p.tokens[t]) {
      throw Error(ErrorCode::Misaligned, where + ": token " + std::to_string(t) + " differs ('" +
                                             g.tokens[t] + "' vs '" + p.tokens[t] + "')");
    }
  }
}

EvalReport finish(const std::vector<SentenceCounts>& parts, SpanMode mode) {
  TypeCounts total;
  EvalReport r;
  r.mode = mode;
  for (const auto& part : parts) {
    for (const auto& [type, c] : part.counts) {
      auto& t = total[type];
      for (std::size_t k = 0; k < 3; ++k) t[k] += c[k];
    }
    r.gold_violations += part.gold_violations;
    r.pred_violations += part.pred_violations;
  }
  for (const auto& [type, c] : total) {
    r.per_type[type] = score_counts(c[0], c[1], c[2]);
    r.matched += c[0];
    r.gold_total += c[1];
    r.pred_total += c[2];
  }
  const auto micro = score_counts(r.matched, r.gold_total, r.pred_total);
  r.micro_precision = micro.precision;
  r.micro_recall = micro.recall;
  r.micro_f1 = micro.f1;
  if (!r.per_type.empty()) {
    for (const auto& [type, s] : r.per_type) {
      r.macro_precision += s.precision;
      r.macro_recall += s.recall;
      r.macro_f1 += s.f1;
    }
    const auto n = static_cast<double>(r.per_type.size());
    r.macro_precision /= n;
    r.macro_recall /= n;
    r.macro_f1 /= n;
  }
  return r;
}

}  // namespace

SpanMode parse_span_mode(std::string_view name) {
  if (name == "strict") return SpanMode::strict;
  if (name == "lenient") return SpanMode::lenient;
  throw Error(ErrorCode::InvalidConfig, "unknown span mode: " + std::string(name));
}

SpanExtraction extract_spans(std::span<const Tag> tags, SpanMode mode) {
  SpanExtraction out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Tag& tag = tags[i];
    if (tag.is_outside()) continue;
    const bool continues = tag.prefix == Prefix::I && i > 0 && !tags[i - 1].is_outside() &&
                           tags[i - 1].type == tag.type;
    if (continues) {
      out.spans.back().end = i;
      continue;
    }
    if (tag.prefix == Prefix::I && mode == SpanMode::strict) out.violations.push_back(i);
    out.spans.push_back({tag.type, i, i});
  }
  return out;
}

TypeScores score_counts(std::size_t matched, std::size_t gold, std::size_t pred) {
  TypeScores s;
  s.matched = matched;
  s.gold_support = gold;
  s.pred_support = pred;
  s.precision = pred ? static_cast<double>(matched) / static_cast<double>(pred) : 0.0;
  s.recall = gold ? static_cast<double>(matched) / static_cast<double>(gold) : 0.0;
  const double denom = s.precision + s.recall;
  s.f1 = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

void check_alignment(const Corpus& gold, const Corpus& pred) {
  if (gold.sentences.size() != pred.sentences.size()) {
    throw Error(ErrorCode::Misaligned,
                "gold has " + std::to_string(gold.sentences.size()) + " sentences, prediction has " +
                    std::to_string(pred.sentences.size()));
  }
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    check_sentence(gold.sentences[i], pred.sentences[i], i);
  }
}

namespace serial {

EvalReport evaluate(const Corpus& gold, const Corpus& pred, SpanMode mode) {
  check_alignment(gold, pred);
  std::vector<SentenceCounts> parts;
  parts.reserve(gold.sentences.size());
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    parts.push_back(count_sentence(gold.sentences[i], pred.sentences[i], mode));
  }
  return finish(parts, mode);
}

}  // namespace serial

EvalReport evaluate(const Corpus& gold, const Corpus& pred, SpanMode mode) {
  check_alignment(gold, pred);
  std::vector<SentenceCounts> parts(gold.sentences.size());
  const auto n = static_cast<std::ptrdiff_t>(gold.sentences.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    parts[idx] = count_sentence(gold.sentences[idx], pred.sentences[idx], mode);
  }
  return finish(parts, mode);
}

double token_accuracy(const Corpus& gold, const Corpus& pred) {
  check_alignment(gold, pred);
  std::size_t same = 0, total = 0;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& g = gold.sentences[i].tags;
    const auto& p = pred.sentences[i].tags;
    total += g.size();
    for (std::size_t t = 0; t < g.size(); ++t) same += g[t] == p[t] ? 1 : 0;
  }
  return total ? static_cast<double>(same) / static_cast<double>(total) : 1.0;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

std::string eval_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = r.mode == SpanMode::strict ? "strict" : "lenient";
  j["averaging"] = "micro";
  j["micro"] = {{"precision", r.micro_precision}, {"recall", r.micro_recall}, {"f1", r.micro_f1}};
  j["macro"] = {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}};
  j["matched"] = r.matched;
  j["gold_total"] = r.gold_total;
  j["pred_total"] = r.pred_total;
  j["gold_violations"] = r.gold_violations;
  j["pred_violations"] = r.pred_violations;
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& [type, s] : r.per_type) {
    types[type] = {{"precision", s.precision}, {"recall", s.recall},     {"f1", s.f1},
                   {"matched", s.matched},     {"gold", s.gold_support}, {"pred", s.pred_support}};
  }
  j["per_type"] = types;
  return j.dump(2) + "\n";
}

std::string eval_to_table(const EvalReport& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %9s %9s %9s %7s %7s %7s\n", "type", "precision",
                "recall", "f1", "gold", "pred", "match");
  out << buf;
  for (const auto& [type, s] : r.per_type) {
    std::snprintf(buf, sizeof buf, "%-8s %9s %9s %9s %7zu %7zu %7zu\n", type.c_str(),
                  format_percent(s.precision).c_str(), format_percent(s.recall).c_str(),
                  format_percent(s.f1).c_str(), s.gold_support, s.pred_support, s.matched);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-8s %9s %9s %9s %7zu %7zu %7zu\n", "micro",
                format_percent(r.micro_precision).c_str(), format_percent(r.micro_recall).c_str(),
                format_percent(r.micro_f1).c_str(), r.gold_total, r.pred_total, r.matched);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-8s %9s %9s %9s\n", "macro",
                format_percent(r.macro_precision).c_str(), format_percent(r.macro_recall).c_str(),
                format_percent(r.macro_f1).c_str());
  out << buf;
  if (r.mode == SpanMode::strict) {
    out << "orphan I- tags: gold " << r.gold_violations << ", predicted " << r.pred_violations
        << "\n";
  }
  return out.str();
}

}  // namespace longner
