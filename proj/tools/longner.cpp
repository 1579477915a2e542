// Command-line front end for the long-range NER toolkit.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "longner/chunker.hpp"
#include "longner/corpus.hpp"
#include "longner/decoder.hpp"
#include "longner/error.hpp"
#include "longner/evaluator.hpp"
#include "longner/experiment.hpp"
#include "longner/model.hpp"
#include "longner/stats.hpp"
#include "longner/synthesizer.hpp"
#include "longner/trainer.hpp"

namespace {

using namespace longner;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string format;
  bool quiet = false;
};

struct ContextFlags {
  std::size_t window = 0;
  std::size_t stride = 0;
  bool truncate = false;
  bool no_constrain = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--window", window, "Window size W in tokens");
    auto* stride_opt = cmd->add_option("--stride", stride, "Window stride S (default W/2)");
    cmd->add_flag("--truncate", truncate, "Keep only the first W tokens, label the rest O")
        ->excludes(stride_opt);
    cmd->add_flag("--no-constrain", no_constrain, "Allow orphan I- tags in decoding");
  }

  ContextPolicy policy() const {
    if (truncate) {
      if (window == 0) throw CLI::ValidationError("--truncate", "requires --window W");
      return ContextPolicy::truncated(window);
    }
    if (window == 0) return ContextPolicy::full();
    return ContextPolicy::sliding(window, stride ? stride : std::max<std::size_t>(1, window / 2));
  }
};

void log(const Globals& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << '\n';
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

std::string join_ids(const std::vector<SentenceId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"longner: long-range NER corpus toolkit and experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for synthesis / training shuffles");
  app.add_option("--format", g.format, "Report format: table, json, markdown or csv");
  app.add_flag("--quiet,-q", g.quiet, "Suppress progress messages");

  std::string input_format = "three_column";
  std::string label_style = "hyphenated";

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Parse, merge and re-serialize corpora");
  std::vector<std::string> parse_in;
  std::string parse_out, out_format = "three_column";
  bool no_header = false;
  parse_cmd->add_option("--in", parse_in, "Input corpus files")->required();
  parse_cmd->add_option("--input-format", input_format, "three_column or conll");
  parse_cmd->add_option("--out", parse_out, "Output file (default stdout)");
  parse_cmd->add_option("--out-format", out_format, "three_column or conll");
  parse_cmd->add_option("--label-style", label_style, "paper_raw or hyphenated");
  parse_cmd->add_flag("--no-header", no_header, "Omit the three-column header row");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Label counts and sentence lengths");
  std::string stats_in;
  std::string stats_style = "paper_raw";
  stats_cmd->add_option("--in", stats_in, "Input corpus")->required();
  stats_cmd->add_option("--input-format", input_format, "three_column or conll");
  stats_cmd->add_option("--label-style", stats_style, "Label keys: paper_raw or hyphenated");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Report or repair orphan I- tags");
  std::string validate_in, validate_out;
  bool repair = false;
  validate_cmd->add_option("--in", validate_in, "Input corpus")->required();
  validate_cmd->add_option("--input-format", input_format, "three_column or conll");
  validate_cmd->add_flag("--repair", repair, "Rewrite orphan I-X to B-X");
  validate_cmd->add_option("--out", validate_out, "Repaired corpus output");
  validate_cmd->add_option("--label-style", label_style, "paper_raw or hyphenated");

  // synthesize
  auto* synth_cmd = app.add_subcommand("synthesize", "Build Concat2/Concat3/Concat-similar/Combined");
  std::string scheme, synth_in, synth_out;
  int k = 0;
  bool allow_remainder = false, with_similar = false;
  synth_cmd->add_option("--scheme", scheme, "concat2, concat3, concat-similar or combined")
      ->required();
  synth_cmd->add_option("--k", k, "Group size for concat schemes");
  synth_cmd->add_flag("--allow-remainder", allow_remainder, "Emit the final short group");
  synth_cmd->add_flag("--combined-with-similar", with_similar,
                      "Include concat-similar in the combined set");
  synth_cmd->add_option("--in", synth_in, "Input corpus")->required();
  synth_cmd->add_option("--out", synth_out, "Output corpus")->required();
  synth_cmd->add_option("--input-format", input_format, "three_column or conll");
  synth_cmd->add_option("--label-style", label_style, "paper_raw or hyphenated");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the averaged-perceptron tagger");
  std::string train_in, train_out;
  TrainConfig tc;
  train_cmd->add_option("--in", train_in, "Training corpus")->required();
  train_cmd->add_option("--out", train_out, "Model file")->required();
  train_cmd->add_option("--epochs", tc.epochs, "Epochs");
  train_cmd->add_option("--lr", tc.learning_rate, "Perceptron step size");
  train_cmd->add_option("--batch-size", tc.batch_size, "Sentences per update");
  train_cmd->add_option("--input-format", input_format, "three_column or conll");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Tag a corpus with a trained model");
  std::string predict_model, predict_in, predict_out;
  ContextFlags predict_ctx;
  predict_cmd->add_option("--model", predict_model, "Model file")->required();
  predict_cmd->add_option("--in", predict_in, "Input corpus")->required();
  predict_cmd->add_option("--out", predict_out, "Output corpus")->required();
  predict_cmd->add_option("--input-format", input_format, "three_column or conll");
  predict_cmd->add_option("--label-style", label_style, "paper_raw or hyphenated");
  predict_ctx.add_to(predict_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Entity-level precision / recall / F1");
  std::string gold_in, pred_in, eval_model, mode = "lenient";
  std::string train_name = "-", test_name = "-";
  ContextFlags eval_ctx;
  eval_cmd->add_option("--gold", gold_in, "Gold corpus")->required();
  auto* pred_opt = eval_cmd->add_option("--pred", pred_in, "Predicted corpus (external or ours)");
  eval_cmd->add_option("--model", eval_model, "Predict with this model instead of --pred")
      ->excludes(pred_opt);
  eval_cmd->add_option("--mode", mode, "strict or lenient orphan-I handling");
  eval_cmd->add_option("--input-format", input_format, "three_column or conll");
  eval_cmd->add_option("--train-name", train_name, "Train column for markdown output");
  eval_cmd->add_option("--test-name", test_name, "Test column for markdown output");
  eval_ctx.add_to(eval_cmd);

  // run-matrix
  auto* matrix_cmd = app.add_subcommand("run-matrix", "Run the train x test experiment matrix");
  std::string config_path;
  matrix_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const auto in_format = parse_corpus_format(input_format);

    if (*parse_cmd) {
      std::vector<Corpus> inputs;
      for (const auto& path : parse_in) inputs.push_back(read_corpus_file(path, in_format));
      auto merged = merge_inputs(std::move(inputs));
      for (const auto& r : merged.remapped) {
        log(g, "remapped " + parse_in[r.input_index] + " sentence " + std::to_string(r.from) +
                   " -> " + std::to_string(r.to));
      }
      const SerializeOptions opts{parse_label_style(label_style), !no_header};
      write_output(parse_out, serialize_corpus(merged.corpus, parse_corpus_format(out_format), opts));
      log(g, std::to_string(merged.corpus.sentences.size()) + " sentences, " +
                 std::to_string(merged.corpus.token_count()) + " tokens");
      return 0;
    }

    if (*stats_cmd) {
      const auto corpus = read_corpus_file(stats_in, in_format);
      const auto report = corpus_stats(corpus, parse_label_style(stats_style));
      std::cout << (g.format == "json" ? stats_to_json(report) : stats_to_table(report));
      return 0;
    }

    if (*validate_cmd) {
      const auto corpus = read_corpus_file(validate_in, in_format);
      const auto issues = validate_iob(corpus);
      if (g.format == "json") {
        std::cout << "[";
        for (std::size_t i = 0; i < issues.size(); ++i) {
          std::cout << (i ? "," : "") << "\n  {\"sentence_id\": " << issues[i].sentence_id
                    << ", \"token\": " << issues[i].token_index << ", \"label\": \""
                    << format_tag(issues[i].tag) << "\"}";
        }
        std::cout << (issues.empty() ? "]\n" : "\n]\n");
      } else {
        for (const auto& issue : issues) {
          std::cout << "sentence " << issue.sentence_id << " token " << issue.token_index
                    << ": orphan " << format_tag(issue.tag) << '\n';
        }
        std::cout << issues.size() << " issue(s)\n";
      }
      if (repair) {
        const SerializeOptions opts{parse_label_style(label_style), true};
        write_output(validate_out, serialize_corpus(repair_iob(corpus), in_format, opts));
      }
      return 0;
    }

    if (*synth_cmd) {
      const auto corpus = read_corpus_file(synth_in, in_format);
      SynthesisConfig sc;
      sc.scheme = parse_scheme(scheme);
      sc.k = k;
      sc.seed = g.seed.value_or(0);
      sc.allow_remainder = allow_remainder;
      sc.combined_with_similar = with_similar;
      const auto result = synthesize(corpus, sc);
      write_corpus_file(synth_out, result.corpus, CorpusFormat::three_column,
                        {parse_label_style(label_style), true});
      std::filesystem::path sidecar(synth_out);
      sidecar.replace_extension(".provenance.tsv");
      write_provenance(sidecar, result.corpus);
      log(g, std::to_string(result.corpus.sentences.size()) + " sentences written to " +
                 synth_out + ", provenance in " + sidecar.string());
      if (!result.unused.empty()) {
        log(g, "unused input sentences: " + join_ids(result.unused));
      }
      return 0;
    }

    if (*train_cmd) {
      auto corpus = read_corpus_file(train_in, in_format);
      if (const auto issues = validate_iob(corpus); !issues.empty()) {
        log(g, "repairing " + std::to_string(issues.size()) + " orphan I- tag(s) before training");
        corpus = repair_iob(std::move(corpus));
      }
      tc.shuffle_seed = g.seed.value_or(0);
      const auto model = train(corpus, tc, [&](int epoch, const TaggerModel&) {
        log(g, "epoch " + std::to_string(epoch + 1) + "/" + std::to_string(tc.epochs) + " done");
      });
      save_model_file(train_out, model);
      log(g, "model with " + std::to_string(model.emissions().size()) + " features written to " +
                 train_out);
      return 0;
    }

    if (*predict_cmd) {
      const auto model = load_model_file(predict_model);
      const auto corpus = read_corpus_file(predict_in, in_format);
      const auto pred =
          predict_corpus(model, corpus, predict_ctx.policy(), !predict_ctx.no_constrain);
      write_corpus_file(predict_out, pred, CorpusFormat::three_column,
                        {parse_label_style(label_style), true});
      return 0;
    }

    if (*eval_cmd) {
      const auto gold = read_corpus_file(gold_in, in_format);
      Corpus pred;
      if (!eval_model.empty()) {
        pred = predict_corpus(load_model_file(eval_model), gold, eval_ctx.policy(),
                              !eval_ctx.no_constrain);
      } else if (!pred_in.empty()) {
        pred = read_corpus_file(pred_in, in_format);
      } else {
        throw CLI::ValidationError("evaluate", "needs --pred or --model");
      }
      const auto report = evaluate(gold, pred, parse_span_mode(mode));
      if (g.format == "json") {
        std::cout << eval_to_json(report);
      } else if (g.format == "markdown") {
        std::cout << "| Train | Test | F1-Score | Precision | Recall |\n|---|---|---|---|---|\n"
                  << "| " << train_name << " | " << test_name << " | "
                  << format_percent(report.micro_f1) << " | "
                  << format_percent(report.micro_precision) << " | "
                  << format_percent(report.micro_recall) << " |\n";
      } else {
        std::cout << eval_to_table(report);
        std::cout << "token accuracy " << format_percent(token_accuracy(gold, pred)) << "\n";
      }
      return 0;
    }

    if (*matrix_cmd) {
      ExperimentConfig config;
      try {
        config = load_experiment_config(config_path);
        if (g.seed) config.seed = *g.seed;
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
      }
      MatrixResult result;
      try {
        result = run_matrix(config);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidConfig) throw;
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
      }
      write_reports(result, config);
      const auto fmt = g.format.empty() ? ReportFormat::markdown : parse_report_format(g.format);
      std::cout << emit_report(result, fmt);
      for (const auto& c : result.cells) {
        if (!c.ok()) {
          std::cerr << "cell " << scheme_name(c.train) << " x " << scheme_name(c.test)
                    << " failed: " << c.error << '\n';
        }
      }
      log(g, "artifacts in " + config.output_dir.string());
      return result.all_ok() ? 0 : kExitFailure;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
