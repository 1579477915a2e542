#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "longner/tag.hpp"

namespace longner {

using SentenceId = std::uint64_t;

struct Sentence {
  SentenceId id = 0;
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
  // Original sentence IDs this sentence was assembled from, in order.
  std::optional<std::vector<SentenceId>> provenance;

  std::size_t size() const { return tokens.size(); }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Ordered sentences plus the set of labels they use. The tagset is kept in
// hyphenated form regardless of the style the corpus was read in.
struct Corpus {
  std::vector<Sentence> sentences;
  std::set<std::string> tagset;

  std::size_t token_count() const;
  void refresh_tagset();
};

enum class CorpusFormat { three_column, conll };

CorpusFormat parse_corpus_format(std::string_view name);

// Parses a whole document. Throws Error with MalformedRow, MalformedLabel or
// SplitSentence; messages carry the 1-based line number.
Corpus parse_corpus(std::string_view text, CorpusFormat format);
Corpus parse_corpus(std::istream& in, CorpusFormat format);

struct SerializeOptions {
  LabelStyle label_style = LabelStyle::hyphenated;
  bool header = true;  // three_column only
};

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format,
                             const SerializeOptions& options = {});
void serialize_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format,
                      const SerializeOptions& options = {});

Corpus read_corpus_file(const std::filesystem::path& path, CorpusFormat format);
void write_corpus_file(const std::filesystem::path& path, const Corpus& corpus,
                       CorpusFormat format, const SerializeOptions& options = {});

// Checks the Sentence invariants (aligned, non-empty, whitespace-free tokens)
// and ID uniqueness. Throws Error{MalformedRow}.
void check_corpus(const Corpus& corpus);

struct IdRemap {
  std::size_t input_index = 0;
  SentenceId from = 0;
  SentenceId to = 0;
};

struct MergedInputs {
  Corpus corpus;
  std::vector<IdRemap> remapped;  // only IDs that changed
};

// Concatenates corpora read from separate files. When a later input reuses an
// ID, that whole input is shifted past the largest ID seen so far.
MergedInputs merge_inputs(std::vector<Corpus> inputs);

// -- IOB well-formedness -----------------------------------------------------

struct IobIssue {
  std::size_t sentence_index = 0;
  SentenceId sentence_id = 0;
  std::size_t token_index = 0;
  Tag tag;
};

std::vector<IobIssue> find_iob_issues(const Sentence& sentence, std::size_t sentence_index = 0);
std::vector<IobIssue> validate_iob(const Corpus& corpus);

// Rewrites each orphan I-X to B-X.
void repair_iob(std::vector<Tag>& tags);
Corpus repair_iob(Corpus corpus);

}  // namespace longner
