#include "longner/synthesizer.hpp"

#include <array>
#include <fstream>
#include <numeric>
#include <sstream>

#include "longner/error.hpp"
#include "longner/rng.hpp"

namespace longner {
namespace {

std::vector<std::size_t> shuffled_positions(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));
  return order;
}

Sentence concatenate(const Corpus& corpus, std::span<const std::size_t> parts,
                     SentenceId new_id) {
  Sentence out;
  out.id = new_id;
  out.provenance.emplace();
  for (const auto p : parts) {
    const auto& s = corpus.sentences[p];
    out.tokens.insert(out.tokens.end(), s.tokens.begin(), s.tokens.end());
    out.tags.insert(out.tags.end(), s.tags.begin(), s.tags.end());
    out.provenance->push_back(s.id);
  }
  return out;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::original: return "original";
    case Scheme::concat2: return "concat2";
    case Scheme::concat3: return "concat3";
    case Scheme::concat_similar: return "concat_similar";
    case Scheme::combined: return "combined";
  }
  return "original";
}

std::string_view scheme_display(Scheme scheme) {
  switch (scheme) {
    case Scheme::original: return "Original";
    case Scheme::concat2: return "Concat 2";
    case Scheme::concat3: return "Concat 3";
    case Scheme::concat_similar: return "Concat-similar";
    case Scheme::combined: return "Combined";
  }
  return "Original";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "original") return Scheme::original;
  if (name == "concat2") return Scheme::concat2;
  if (name == "concat3") return Scheme::concat3;
  if (name == "concat_similar" || name == "concat-similar") return Scheme::concat_similar;
  if (name == "combined") return Scheme::combined;
  throw Error(ErrorCode::InvalidConfig, "unknown scheme: " + std::string(name));
}

SynthesisResult concat_k(const Corpus& corpus, int k, std::uint64_t seed,
                         bool allow_remainder) {
  if (k < 2) throw Error(ErrorCode::InvalidK, "k must be at least 2, got " + std::to_string(k));
  const auto n = corpus.sentences.size();
  const auto group = static_cast<std::size_t>(k);
  if (n < group) {
    throw Error(ErrorCode::TooFewSentences, "concat" + std::to_string(k) + " needs at least " +
                                                std::to_string(k) + " sentences, got " +
                                                std::to_string(n));
  }

  SplitMix64 rng(seed);
  const auto order = shuffled_positions(n, rng);
  const std::span<const std::size_t> all(order);

  SynthesisResult result;
  const auto full = n / group;
  for (std::size_t g = 0; g < full; ++g) {
    result.corpus.sentences.push_back(concatenate(corpus, all.subspan(g * group, group), g));
  }
  const auto rest = all.subspan(full * group);
  if (!rest.empty()) {
    if (allow_remainder) {
      result.corpus.sentences.push_back(concatenate(corpus, rest, full));
    } else {
      for (const auto p : rest) result.unused.push_back(corpus.sentences[p].id);
    }
  }
  result.corpus.refresh_tagset();
  return result;
}

SynthesisResult concat_similar(const Corpus& corpus, std::uint64_t seed) {
  const auto n = corpus.sentences.size();
  if (n < 3) {
    throw Error(ErrorCode::TooFewSentences,
                "concat_similar needs at least 3 sentences, got " + std::to_string(n));
  }

  SplitMix64 rng(seed);
  const auto order = shuffled_positions(n, rng);

  SynthesisResult result;
  const auto triples = n / 3;
  for (std::size_t g = 0; g < triples; ++g) {
    std::array<std::size_t, 4> parts{order[3 * g], order[3 * g + 1], order[3 * g + 2], 0};
    parts[3] = parts[rng.below(3)];
    rng.shuffle(std::span(parts));
    result.corpus.sentences.push_back(concatenate(corpus, parts, g));
  }
  for (std::size_t p = triples * 3; p < n; ++p) {
    result.unused.push_back(corpus.sentences[order[p]].id);
  }
  result.corpus.refresh_tagset();
  return result;
}

Corpus combine(std::span<const Corpus> corpora) {
  if (corpora.empty()) throw Error(ErrorCode::EmptyList, "combine needs at least one corpus");
  Corpus out;
  for (const auto& c : corpora) {
    for (const auto& s : c.sentences) {
      out.sentences.push_back(s);
      out.sentences.back().id = out.sentences.size() - 1;
    }
    out.tagset.insert(c.tagset.begin(), c.tagset.end());
  }
  return out;
}

SynthesisResult synthesize(const Corpus& corpus, const SynthesisConfig& config) {
  switch (config.scheme) {
    case Scheme::original:
      return {corpus, {}};
    case Scheme::concat2:
      return concat_k(corpus, config.k ? config.k : 2, config.seed, config.allow_remainder);
    case Scheme::concat3:
      return concat_k(corpus, config.k ? config.k : 3, config.seed, config.allow_remainder);
    case Scheme::concat_similar:
      return concat_similar(corpus, config.seed);
    case Scheme::combined: {
      std::vector<Corpus> parts;
      parts.push_back(corpus);
      for (auto& s : parts.back().sentences) s.provenance = std::vector<SentenceId>{s.id};

      SynthesisResult result;
      auto take = [&](SynthesisResult r) {
        result.unused.insert(result.unused.end(), r.unused.begin(), r.unused.end());
        parts.push_back(std::move(r.corpus));
      };
      take(concat_k(corpus, 2, derive_seed(config.seed, "concat2"), config.allow_remainder));
      take(concat_k(corpus, 3, derive_seed(config.seed, "concat3"), config.allow_remainder));
      if (config.combined_with_similar) {
        take(concat_similar(corpus, derive_seed(config.seed, "concat_similar")));
      }
      result.corpus = combine(parts);
      return result;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown scheme");
}

std::string serialize_provenance(const Corpus& corpus) {
  std::ostringstream out;
  for (const auto& s : corpus.sentences) {
    out << s.id << '\t';
    if (s.provenance) {
      for (std::size_t i = 0; i < s.provenance->size(); ++i) {
        out << (i ? "," : "") << (*s.provenance)[i];
      }
    } else {
      out << s.id;
    }
    out << '\n';
  }
  return out.str();
}

void write_provenance(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << serialize_provenance(corpus);
}

}  // namespace longner
