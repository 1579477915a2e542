#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "longner/tag.hpp"

namespace longner {

inline constexpr std::string_view kModelVersion = "ner-model-v1";

struct TrainMeta {
  int epochs = 0;
  std::uint64_t seed = 0;
  int feature_version = 0;

  friend bool operator==(const TrainMeta&, const TrainMeta&) = default;
};

// Linear-chain scoring model: per-feature emission weights for every tag and
// a dense tag-to-tag transition table. Tag indices follow `labels`, which is
// kept sorted (hyphenated form) so that index order is the tie-break order.
class TaggerModel {
 public:
  TaggerModel() = default;

  // Canonicalizes: parses each label, adds "O", sorts, removes duplicates.
  explicit TaggerModel(const std::vector<std::string>& labels);

  std::size_t tag_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Tag>& tags() const { return tags_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  // Emission weights for a feature, one per tag; nullptr when unseen.
  const std::vector<double>* emission(const std::string& feature) const;
  std::vector<double>& emission_row(const std::string& feature);
  const std::unordered_map<std::string, std::vector<double>>& emissions() const {
    return emissions_;
  }

  double transition(std::size_t prev, std::size_t next) const {
    return transitions_[prev * labels_.size() + next];
  }
  double& transition(std::size_t prev, std::size_t next) {
    return transitions_[prev * labels_.size() + next];
  }

  // Drops emission rows that are entirely zero.
  void prune();

  bool averaged = false;
  std::optional<TrainMeta> meta;

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Tag> tags_;
  std::unordered_map<std::string, std::vector<double>> emissions_;
  std::vector<double> transitions_;
};

// Text format: version header, tag line, optional meta line, then sorted
// "E\tfeature\ttag\tweight" and "T\ttag\ttag\tweight" lines (17 significant
// digits, zero weights omitted).
void save_model(std::ostream& out, const TaggerModel& model);
std::string save_model(const TaggerModel& model);

// Throws Error{UnknownVersion} or Error{MalformedModelFile}.
TaggerModel load_model(std::istream& in);
TaggerModel load_model_text(std::string_view text);

void save_model_file(const std::filesystem::path& path, const TaggerModel& model);
TaggerModel load_model_file(const std::filesystem::path& path);

}  // namespace longner
