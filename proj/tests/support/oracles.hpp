#pragma once

// Independent reference implementations. They deliberately avoid the
// library's span extractor and decoder.

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "longner/features.hpp"
#include "longner/model.hpp"
#include "longner/tag.hpp"

namespace longner::testing {

using SpanKey = std::tuple<std::string, std::size_t, std::size_t>;

// (type, start, end) is an entity iff tag[start] opens an X run (B-X, or I-X
// not continuing an X), every tag in (start, end] is I-X, and tag[end+1] is
// not I-X. Enumerates every candidate triple.
inline std::set<SpanKey> brute_force_spans(const std::vector<Tag>& tags) {
  std::set<std::string> types;
  for (const auto& t : tags) {
    if (!t.is_outside()) types.insert(t.type);
  }
  const auto is = [&](std::size_t i, Prefix p, const std::string& x) {
    return tags[i].prefix == p && tags[i].type == x;
  };
  std::set<SpanKey> out;
  for (const auto& x : types) {
    for (std::size_t s = 0; s < tags.size(); ++s) {
      const bool continues =
          s > 0 && (is(s - 1, Prefix::B, x) || is(s - 1, Prefix::I, x)) && is(s, Prefix::I, x);
      const bool opens = (is(s, Prefix::B, x) || is(s, Prefix::I, x)) && !continues;
      if (!opens) continue;
      for (std::size_t e = s; e < tags.size(); ++e) {
        bool inner = true;
        for (std::size_t m = s + 1; m <= e; ++m) inner = inner && is(m, Prefix::I, x);
        if (!inner) break;
        const bool closed = e + 1 == tags.size() || !is(e + 1, Prefix::I, x);
        if (closed) out.insert({x, s, e});
      }
    }
  }
  return out;
}

struct OracleCounts {
  std::map<std::string, std::array<std::size_t, 3>> per_type;  // matched, gold, pred
  std::size_t matched = 0, gold = 0, pred = 0;
};

inline void accumulate(OracleCounts& c, const std::vector<Tag>& gold,
                       const std::vector<Tag>& pred) {
  const auto g = brute_force_spans(gold);
  const auto p = brute_force_spans(pred);
  for (const auto& span : g) {
    ++c.per_type[std::get<0>(span)][1];
    ++c.gold;
    if (p.contains(span)) {
      ++c.per_type[std::get<0>(span)][0];
      ++c.matched;
    }
  }
  for (const auto& span : p) {
    ++c.per_type[std::get<0>(span)][2];
    ++c.pred;
  }
}

inline std::array<double, 3> oracle_prf(std::size_t matched, std::size_t gold, std::size_t pred) {
  const double p = pred ? static_cast<double>(matched) / static_cast<double>(pred) : 0.0;
  const double r = gold ? static_cast<double>(matched) / static_cast<double>(gold) : 0.0;
  const double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  return {p, r, f};
}

// Sum over positions of the emission weights of the position's features,
// plus transitions, accumulated in a plain nested loop.
inline double oracle_sequence_score(const TaggerModel& model,
                                    const std::vector<std::string>& tokens,
                                    const std::vector<std::size_t>& path) {
  double total = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& f : extract_features(std::span<const std::string>(tokens), i)) {
      const auto it = model.emissions().find(f);
      if (it != model.emissions().end()) total += it->second[path[i]];
    }
    if (i > 0) total += model.transition(path[i - 1], path[i]);
  }
  return total;
}

inline bool oracle_iob_ok(const TaggerModel& model, const std::vector<std::size_t>& path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Tag& t = model.tags()[path[i]];
    if (t.prefix != Prefix::I) continue;
    if (i == 0) return false;
    const Tag& p = model.tags()[path[i - 1]];
    if (p.is_outside() || p.type != t.type) return false;
  }
  return true;
}

struct EnumerationResult {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> argmax;  // every sequence attaining best
};

inline EnumerationResult enumerate_best(const TaggerModel& model,
                                        const std::vector<std::string>& tokens, bool constrain) {
  EnumerationResult r;
  const auto k = model.tag_count();
  std::vector<std::size_t> path(tokens.size(), 0);
  while (true) {
    if (!constrain || oracle_iob_ok(model, path)) {
      const double s = oracle_sequence_score(model, tokens, path);
      if (s > r.best) {
        r.best = s;
        r.argmax = {path};
      } else if (s == r.best) {
        r.argmax.push_back(path);
      }
    }
    std::size_t i = 0;
    while (i < path.size() && ++path[i] == k) path[i++] = 0;
    if (i == path.size()) break;
  }
  return r;
}

}  // namespace longner::testing
