#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "longner/chunker.hpp"
#include "longner/corpus.hpp"
#include "longner/evaluator.hpp"
#include "longner/synthesizer.hpp"
#include "longner/trainer.hpp"

namespace longner {

enum class ReportFormat { markdown, csv, json };

ReportFormat parse_report_format(std::string_view name);

struct ExperimentConfig {
  std::filesystem::path base_train;
  std::filesystem::path base_test;
  std::optional<std::filesystem::path> base_valid;
  CorpusFormat input_format = CorpusFormat::three_column;
  std::uint64_t seed = 0;
  std::vector<Scheme> schemes;
  std::vector<Scheme> test_sets;
  TrainConfig tagger;
  ContextPolicy context;
  bool constrain = true;
  SpanMode span_mode = SpanMode::lenient;
  bool combined_with_similar = false;
  std::filesystem::path output_dir;
  std::vector<ReportFormat> report_formats{ReportFormat::markdown, ReportFormat::csv,
                                           ReportFormat::json};
};

// Parses the JSON config. Relative paths resolve against `base_dir`; a missing
// output_dir falls back to $LONGNER_OUT. Unknown keys are rejected.
// Throws Error{InvalidConfig}.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Canonical JSON form of the config (sorted keys) and its FNV-1a hash.
std::string canonical_config(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

// Seed used to synthesize `scheme` for any split.
std::uint64_t scheme_seed(std::uint64_t seed, Scheme scheme);

struct CellResult {
  Scheme train = Scheme::original;
  Scheme test = Scheme::original;
  std::optional<EvalReport> report;
  double token_accuracy = 0.0;
  std::string error;  // empty on success
  double seconds = 0.0;  // wall clock, never part of the JSON report

  bool ok() const { return error.empty(); }
};

struct MatrixResult {
  std::vector<Scheme> schemes;
  std::vector<Scheme> test_sets;
  std::vector<CellResult> cells;  // train-major, in config order
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  // micro-F1 on the validation split after each epoch, per training scheme
  std::map<Scheme, std::vector<double>> validation_f1;

  const CellResult* cell(Scheme train, Scheme test) const;
  bool all_ok() const;
};

// Synthesizes, trains, predicts and scores every (scheme, test set) pair,
// writing every intermediate artifact under config.output_dir. A failing
// cell records its error and the rest still run. Throws Error{InvalidConfig}
// when the base files cannot be read.
MatrixResult run_matrix(const ExperimentConfig& config);

// Re-scores one cell from the model and test corpus persisted by run_matrix.
CellResult rerun_cell(const ExperimentConfig& config, Scheme train, Scheme test);

std::string emit_report(const MatrixResult& result, ReportFormat format);
MatrixResult parse_report_json(const std::string& text);

// Writes report.<ext> for each requested format and timings.json.
void write_reports(const MatrixResult& result, const ExperimentConfig& config);

}  // namespace longner
