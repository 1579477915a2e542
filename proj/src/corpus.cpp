#include "longner/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "longner/error.hpp"
#include "longner/utf8.hpp"

namespace longner {
namespace {

constexpr std::string_view kHeader = "Words\tLabels\tSentence ID";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), is_space);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

std::optional<SentenceId> parse_id(std::string_view field) {
  field = trim(field);
  SentenceId id = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, id);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return id;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const auto start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Word, label, id. Commas are only treated as separators when the line has
// no tab; the word may then itself contain commas.
std::optional<std::array<std::string_view, 3>> split_row(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) {
    const auto fields = split(line, '\t');
    if (fields.size() != 3) return std::nullopt;
    return std::array{fields[0], fields[1], fields[2]};
  }
  const auto last = line.rfind(',');
  if (last == std::string_view::npos || last == 0) return std::nullopt;
  const auto mid = line.rfind(',', last - 1);
  if (mid == std::string_view::npos) return std::nullopt;
  return std::array{line.substr(0, mid), line.substr(mid + 1, last - mid - 1),
                    line.substr(last + 1)};
}

std::string checked_token(std::string_view word, std::size_t line_no) {
  if (word.empty()) fail(ErrorCode::MalformedRow, line_no, "empty token");
  if (std::any_of(word.begin(), word.end(), is_space)) {
    fail(ErrorCode::MalformedRow, line_no, "token contains whitespace");
  }
  return std::string(word);
}

Tag checked_tag(std::string_view label, std::size_t line_no) {
  try {
    return parse_tag(label);
  } catch (const Error& e) {
    fail(e.code(), line_no, e.what());
  }
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  text = utf8::strip_bom(text);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!utf8::is_valid(line)) fail(ErrorCode::MalformedRow, line_no, "invalid UTF-8");
    fn(line, line_no);
    start = end + 1;
  }
}

Corpus parse_three_column(std::string_view text) {
  Corpus corpus;
  std::unordered_set<SentenceId> closed;
  bool first_row = true;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (is_blank(line)) return;
    const auto row = split_row(line);
    if (!row) fail(ErrorCode::MalformedRow, line_no, "expected 3 columns");
    const auto& [word, label, id_field] = *row;
    const auto id = parse_id(id_field);
    if (first_row) {
      first_row = false;
      if (!id) return;  // header row
    }
    if (!id) fail(ErrorCode::MalformedRow, line_no, "sentence ID is not an integer");

    auto token = checked_token(word, line_no);
    auto tag = checked_tag(label, line_no);
    if (corpus.sentences.empty() || corpus.sentences.back().id != *id) {
      if (!corpus.sentences.empty()) closed.insert(corpus.sentences.back().id);
      if (closed.contains(*id)) {
        fail(ErrorCode::SplitSentence, line_no,
             "rows of sentence " + std::to_string(*id) + " are not contiguous");
      }
      corpus.sentences.push_back(Sentence{*id, {}, {}, std::nullopt});
    }
    corpus.tagset.insert(format_tag(tag));
    corpus.sentences.back().tokens.push_back(std::move(token));
    corpus.sentences.back().tags.push_back(std::move(tag));
  });
  return corpus;
}

Corpus parse_conll(std::string_view text) {
  Corpus corpus;
  bool open = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (is_blank(line)) {
      open = false;
      return;
    }
    std::vector<std::string_view> fields;
    if (line.find('\t') != std::string_view::npos) {
      fields = split(line, '\t');
    } else {
      fields = split_ws(line);
    }
    if (fields.size() != 2) fail(ErrorCode::MalformedRow, line_no, "expected 2 columns");
    auto token = checked_token(fields[0], line_no);
    auto tag = checked_tag(fields[1], line_no);
    if (!open) {
      corpus.sentences.push_back(
          Sentence{static_cast<SentenceId>(corpus.sentences.size()), {}, {}, std::nullopt});
      open = true;
    }
    corpus.tagset.insert(format_tag(tag));
    corpus.sentences.back().tokens.push_back(std::move(token));
    corpus.sentences.back().tags.push_back(std::move(tag));
  });
  return corpus;
}

}  // namespace

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

void Corpus::refresh_tagset() {
  tagset.clear();
  for (const auto& s : sentences) {
    for (const auto& t : s.tags) tagset.insert(format_tag(t));
  }
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "three_column" || name == "three-column" || name == "tsv") {
    return CorpusFormat::three_column;
  }
  if (name == "conll") return CorpusFormat::conll;
  throw Error(ErrorCode::InvalidConfig, "unknown corpus format: " + std::string(name));
}

Corpus parse_corpus(std::string_view text, CorpusFormat format) {
  return format == CorpusFormat::three_column ? parse_three_column(text)
                                              : parse_conll(text);
}

Corpus parse_corpus(std::istream& in, CorpusFormat format) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_corpus(text, format);
}

void serialize_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format,
                      const SerializeOptions& options) {
  if (format == CorpusFormat::three_column) {
    if (options.header) out << kHeader << '\n';
    for (const auto& s : corpus.sentences) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        out << s.tokens[i] << '\t' << format_tag(s.tags[i], options.label_style) << '\t'
            << s.id << '\n';
      }
    }
    return;
  }
  bool first = true;
  for (const auto& s : corpus.sentences) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.tokens[i] << '\t' << format_tag(s.tags[i], options.label_style) << '\n';
    }
  }
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format,
                             const SerializeOptions& options) {
  std::ostringstream out;
  serialize_corpus(out, corpus, format, options);
  return out.str();
}

Corpus read_corpus_file(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return parse_corpus(in, format);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_corpus_file(const std::filesystem::path& path, const Corpus& corpus,
                       CorpusFormat format, const SerializeOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  serialize_corpus(out, corpus, format, options);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

void check_corpus(const Corpus& corpus) {
  std::unordered_set<SentenceId> ids;
  for (const auto& s : corpus.sentences) {
    const auto where = "sentence " + std::to_string(s.id) + ": ";
    if (!ids.insert(s.id).second) {
      throw Error(ErrorCode::MalformedRow, where + "duplicate sentence ID");
    }
    if (s.tokens.empty() || s.tokens.size() != s.tags.size()) {
      throw Error(ErrorCode::MalformedRow, where + "tokens and tags must align and be non-empty");
    }
    for (const auto& tok : s.tokens) {
      if (tok.empty() || std::any_of(tok.begin(), tok.end(), is_space)) {
        throw Error(ErrorCode::MalformedRow, where + "empty token or token with whitespace");
      }
    }
  }
}

MergedInputs merge_inputs(std::vector<Corpus> inputs) {
  MergedInputs merged;
  std::unordered_set<SentenceId> seen;
  SentenceId next_free = 0;
  for (std::size_t idx = 0; idx < inputs.size(); ++idx) {
    auto& input = inputs[idx];
    const bool clash = std::any_of(input.sentences.begin(), input.sentences.end(),
                                   [&](const Sentence& s) { return seen.contains(s.id); });
    const SentenceId offset = clash ? next_free : 0;
    for (auto& s : input.sentences) {
      if (offset != 0) {
        merged.remapped.push_back({idx, s.id, s.id + offset});
        s.id += offset;
      }
      seen.insert(s.id);
      next_free = std::max(next_free, s.id + 1);
      merged.corpus.sentences.push_back(std::move(s));
    }
    merged.corpus.tagset.insert(input.tagset.begin(), input.tagset.end());
  }
  return merged;
}

std::vector<IobIssue> find_iob_issues(const Sentence& sentence, std::size_t sentence_index) {
  std::vector<IobIssue> issues;
  for (std::size_t i = 0; i < sentence.tags.size(); ++i) {
    const Tag* prev = i == 0 ? nullptr : &sentence.tags[i - 1];
    if (!iob_allows(prev, sentence.tags[i])) {
      issues.push_back({sentence_index, sentence.id, i, sentence.tags[i]});
    }
  }
  return issues;
}

std::vector<IobIssue> validate_iob(const Corpus& corpus) {
  std::vector<IobIssue> issues;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    auto found = find_iob_issues(corpus.sentences[s], s);
    issues.insert(issues.end(), found.begin(), found.end());
  }
  return issues;
}

void repair_iob(std::vector<Tag>& tags) {
  // Only I -> B rewrites of the same type, so checking against the already
  // repaired predecessor gives the same answer as the original one.
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!iob_allows(i == 0 ? nullptr : &tags[i - 1], tags[i])) tags[i].prefix = Prefix::B;
  }
}

Corpus repair_iob(Corpus corpus) {
  for (auto& s : corpus.sentences) repair_iob(s.tags);
  corpus.refresh_tagset();
  return corpus;
}

}  // namespace longner
