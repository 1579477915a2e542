#include "longner/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "longner/decoder.hpp"
#include "longner/error.hpp"
#include "longner/rng.hpp"

namespace longner {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, "config: " + msg);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<Scheme> parse_scheme_list(const json& obj, const char* key, bool allow_combined) {
  if (!obj.contains(key) || !obj.at(key).is_array() || obj.at(key).empty()) {
    config_error(std::string("'") + key + "' must be a non-empty array");
  }
  std::vector<Scheme> out;
  for (const auto& item : obj.at(key)) {
    if (!item.is_string()) config_error(std::string("'") + key + "' entries must be strings");
    const auto scheme = parse_scheme(item.get<std::string>());
    if (scheme == Scheme::combined && !allow_combined) {
      config_error("'combined' is a training set only");
    }
    if (std::find(out.begin(), out.end(), scheme) != out.end()) {
      config_error(std::string("duplicate entry in '") + key + "'");
    }
    out.push_back(scheme);
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string_view format_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::markdown: return "md";
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
  }
  return "json";
}

std::string cell_stem(Scheme train, Scheme test) {
  return std::string(scheme_name(train)) + "__" + std::string(scheme_name(test));
}

fs::path train_file(const ExperimentConfig& c, Scheme s) {
  return c.output_dir / "data" / ("train_" + std::string(scheme_name(s)) + ".tsv");
}
fs::path valid_file(const ExperimentConfig& c, Scheme s) {
  return c.output_dir / "data" / ("valid_" + std::string(scheme_name(s)) + ".tsv");
}
fs::path test_file(const ExperimentConfig& c, Scheme s) {
  return c.output_dir / "data" / ("test_" + std::string(scheme_name(s)) + ".tsv");
}
fs::path model_file(const ExperimentConfig& c, Scheme s) {
  return c.output_dir / "models" / (std::string(scheme_name(s)) + ".model");
}
fs::path prediction_file(const ExperimentConfig& c, Scheme train, Scheme test) {
  return c.output_dir / "predictions" / (cell_stem(train, test) + ".tsv");
}
fs::path cell_file(const ExperimentConfig& c, Scheme train, Scheme test) {
  return c.output_dir / "cells" / (cell_stem(train, test) + ".json");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void write_synthesized(const fs::path& path, const Corpus& corpus) {
  write_corpus_file(path, corpus, CorpusFormat::three_column);
  fs::path sidecar = path;
  sidecar.replace_extension(".provenance.tsv");
  write_provenance(sidecar, corpus);
}

SynthesisConfig synthesis_for(const ExperimentConfig& c, Scheme s) {
  SynthesisConfig sc;
  sc.scheme = s;
  sc.seed = scheme_seed(c.seed, s);
  sc.combined_with_similar = c.combined_with_similar;
  return sc;
}

ordered_json eval_json(const EvalReport& r) { return ordered_json::parse(eval_to_json(r)); }

EvalReport eval_from_json(const json& j) {
  EvalReport r;
  r.mode = parse_span_mode(j.at("mode").get<std::string>());
  r.micro_precision = j.at("micro").at("precision").get<double>();
  r.micro_recall = j.at("micro").at("recall").get<double>();
  r.micro_f1 = j.at("micro").at("f1").get<double>();
  r.macro_precision = j.at("macro").at("precision").get<double>();
  r.macro_recall = j.at("macro").at("recall").get<double>();
  r.macro_f1 = j.at("macro").at("f1").get<double>();
  r.matched = j.at("matched").get<std::size_t>();
  r.gold_total = j.at("gold_total").get<std::size_t>();
  r.pred_total = j.at("pred_total").get<std::size_t>();
  r.gold_violations = j.at("gold_violations").get<std::size_t>();
  r.pred_violations = j.at("pred_violations").get<std::size_t>();
  for (const auto& [type, s] : j.at("per_type").items()) {
    TypeScores t;
    t.precision = s.at("precision").get<double>();
    t.recall = s.at("recall").get<double>();
    t.f1 = s.at("f1").get<double>();
    t.matched = s.at("matched").get<std::size_t>();
    t.gold_support = s.at("gold").get<std::size_t>();
    t.pred_support = s.at("pred").get<std::size_t>();
    r.per_type[type] = t;
  }
  return r;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CellResult score_cell(const ExperimentConfig& config, const TaggerModel& model,
                      const Corpus& gold, Scheme train, Scheme test) {
  CellResult cell{train, test, std::nullopt, 0.0, {}, 0.0};
  const auto pred = predict_corpus(model, gold, config.context, config.constrain);
  write_corpus_file(prediction_file(config, train, test), pred, CorpusFormat::three_column);
  cell.report = evaluate(gold, pred, config.span_mode);
  cell.token_accuracy = token_accuracy(gold, pred);
  auto j = eval_json(*cell.report);
  j["token_accuracy"] = cell.token_accuracy;
  write_text(cell_file(config, train, test), j.dump(2) + "\n");
  return cell;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw Error(ErrorCode::InvalidConfig, "unknown report format: " + std::string(name));
}

ExperimentConfig parse_experiment_config(const std::string& json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  reject_unknown_keys(j,
                      {"base_train", "base_test", "base_valid", "input_format", "seed", "schemes",
                       "test_sets", "tagger", "window", "constrain", "span_mode",
                       "combined_with_similar", "output_dir", "report_formats"},
                      "config");

  ExperimentConfig c;
  if (!j.contains("base_train") || !j.contains("base_test")) {
    config_error("'base_train' and 'base_test' are required");
  }
  c.base_train = resolve(base_dir, get_or<std::string>(j, "base_train", ""));
  c.base_test = resolve(base_dir, get_or<std::string>(j, "base_test", ""));
  if (j.contains("base_valid")) {
    c.base_valid = resolve(base_dir, get_or<std::string>(j, "base_valid", ""));
  }
  c.input_format = parse_corpus_format(get_or<std::string>(j, "input_format", "three_column"));
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.schemes = parse_scheme_list(j, "schemes", true);
  c.test_sets = parse_scheme_list(j, "test_sets", false);

  c.tagger.shuffle_seed = derive_seed(c.seed, "tagger");
  if (j.contains("tagger")) {
    const auto& t = j.at("tagger");
    reject_unknown_keys(t, {"epochs", "shuffle_seed", "learning_rate", "batch_size"}, "tagger");
    c.tagger.epochs = get_or<int>(t, "epochs", c.tagger.epochs);
    c.tagger.shuffle_seed = get_or<std::uint64_t>(t, "shuffle_seed", c.tagger.shuffle_seed);
    c.tagger.learning_rate = get_or<double>(t, "learning_rate", c.tagger.learning_rate);
    c.tagger.batch_size = get_or<int>(t, "batch_size", c.tagger.batch_size);
  }
  try {
    check_train_config(c.tagger);
  } catch (const Error& e) {
    config_error(e.what());
  }

  if (j.contains("window")) {
    const auto& w = j.at("window");
    reject_unknown_keys(w, {"size", "stride", "truncate"}, "window");
    if (w.contains("truncate")) {
      if (w.contains("size") || w.contains("stride")) {
        config_error("window.truncate is exclusive with size/stride");
      }
      c.context = ContextPolicy::truncated(get_or<std::size_t>(w, "truncate", 0));
      if (c.context.window_size == 0) config_error("window.truncate must be positive");
    } else {
      const auto size = get_or<std::size_t>(w, "size", 0);
      const auto stride = get_or<std::size_t>(w, "stride", size / 2 ? size / 2 : 1);
      if (size == 0 || stride == 0 || stride > size) {
        config_error("window needs 1 <= stride <= size");
      }
      c.context = ContextPolicy::sliding(size, stride);
    }
  }
  c.constrain = get_or<bool>(j, "constrain", true);
  c.span_mode = parse_span_mode(get_or<std::string>(j, "span_mode", "lenient"));
  c.combined_with_similar = get_or<bool>(j, "combined_with_similar", false);

  if (j.contains("output_dir")) {
    c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", ""));
  } else if (const char* env = std::getenv("LONGNER_OUT"); env && *env) {
    c.output_dir = env;
  } else {
    config_error("no 'output_dir' and LONGNER_OUT is not set");
  }

  if (j.contains("report_formats")) {
    c.report_formats.clear();
    for (const auto& f : j.at("report_formats")) {
      if (!f.is_string()) config_error("report_formats entries must be strings");
      c.report_formats.push_back(parse_report_format(f.get<std::string>()));
    }
  }
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

std::string canonical_config(const ExperimentConfig& c) {
  json j;
  j["base_train"] = c.base_train.generic_string();
  j["base_test"] = c.base_test.generic_string();
  j["base_valid"] = c.base_valid ? json(c.base_valid->generic_string()) : json(nullptr);
  j["input_format"] = c.input_format == CorpusFormat::conll ? "conll" : "three_column";
  j["seed"] = c.seed;
  for (auto s : c.schemes) j["schemes"].push_back(scheme_name(s));
  for (auto s : c.test_sets) j["test_sets"].push_back(scheme_name(s));
  j["tagger"] = {{"epochs", c.tagger.epochs},
                 {"shuffle_seed", c.tagger.shuffle_seed},
                 {"learning_rate", c.tagger.learning_rate},
                 {"batch_size", c.tagger.batch_size}};
  switch (c.context.kind) {
    case ContextPolicy::Kind::full: j["window"] = nullptr; break;
    case ContextPolicy::Kind::window:
      j["window"] = {{"size", c.context.window_size}, {"stride", c.context.stride}};
      break;
    case ContextPolicy::Kind::truncate:
      j["window"] = {{"truncate", c.context.window_size}};
      break;
  }
  j["constrain"] = c.constrain;
  j["span_mode"] = c.span_mode == SpanMode::strict ? "strict" : "lenient";
  j["combined_with_similar"] = c.combined_with_similar;
  return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return stable_hash(canonical_config(config));
}

std::uint64_t scheme_seed(std::uint64_t seed, Scheme scheme) {
  return derive_seed(seed, scheme_name(scheme));
}

const CellResult* MatrixResult::cell(Scheme train, Scheme test) const {
  for (const auto& c : cells) {
    if (c.train == train && c.test == test) return &c;
  }
  return nullptr;
}

bool MatrixResult::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok(); });
}

MatrixResult run_matrix(const ExperimentConfig& config) {
  Corpus base_train, base_test;
  std::optional<Corpus> base_valid;
  try {
    base_train = read_corpus_file(config.base_train, config.input_format);
    base_test = read_corpus_file(config.base_test, config.input_format);
    if (config.base_valid) base_valid = read_corpus_file(*config.base_valid, config.input_format);
  } catch (const Error& e) {
    config_error(e.what());
  }
  for (const char* sub : {"data", "models", "predictions", "cells"}) {
    fs::create_directories(config.output_dir / sub);
  }
  write_text(config.output_dir / "config.resolved.json", canonical_config(config) + "\n");

  MatrixResult result;
  result.schemes = config.schemes;
  result.test_sets = config.test_sets;
  result.seed = config.seed;
  result.config_hash = config_hash(config);

  // test corpora are shared by every training scheme
  std::map<Scheme, Corpus> tests;
  std::map<Scheme, std::string> test_errors;
  for (const auto t : config.test_sets) {
    try {
      auto synth = synthesize(base_test, synthesis_for(config, t));
      write_synthesized(test_file(config, t), synth.corpus);
      tests.emplace(t, std::move(synth.corpus));
    } catch (const std::exception& e) {
      test_errors[t] = std::string("test set: ") + e.what();
    }
  }

  const auto n_train = config.schemes.size();
  const auto n_test = config.test_sets.size();
  result.cells.resize(n_train * n_test);
  std::vector<std::vector<double>> validation(n_train);

  const auto n = static_cast<std::ptrdiff_t>(n_train);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto s_idx = static_cast<std::size_t>(si);
    const auto scheme = config.schemes[s_idx];
    const auto started = std::chrono::steady_clock::now();
    std::optional<TaggerModel> model;
    std::string train_error;
    try {
      auto synth = synthesize(base_train, synthesis_for(config, scheme));
      write_synthesized(train_file(config, scheme), synth.corpus);
      std::optional<Corpus> valid;
      if (base_valid) {
        valid = synthesize(*base_valid, synthesis_for(config, scheme)).corpus;
        write_synthesized(valid_file(config, scheme), *valid);
      }
      EpochCallback on_epoch;
      if (valid) {
        on_epoch = [&](int, const TaggerModel& m) {
          const auto pred = predict_corpus(m, *valid, config.context, config.constrain);
          validation[s_idx].push_back(evaluate(*valid, pred, config.span_mode).micro_f1);
        };
      }
      model = train(repair_iob(std::move(synth.corpus)), config.tagger, on_epoch);
      save_model_file(model_file(config, scheme), *model);
    } catch (const std::exception& e) {
      train_error = std::string("training: ") + e.what();
    }
    const double train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    for (std::size_t ti = 0; ti < n_test; ++ti) {
      const auto test = config.test_sets[ti];
      auto& cell = result.cells[s_idx * n_test + ti];
      const auto cell_start = std::chrono::steady_clock::now();
      cell.train = scheme;
      cell.test = test;
      if (!train_error.empty()) {
        cell.error = train_error;
      } else if (const auto it = test_errors.find(test); it != test_errors.end()) {
        cell.error = it->second;
      } else {
        try {
          cell = score_cell(config, *model, tests.at(test), scheme, test);
        } catch (const std::exception& e) {
          cell.error = std::string("evaluation: ") + e.what();
        }
      }
      cell.seconds = train_seconds / static_cast<double>(n_test) +
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - cell_start)
                         .count();
    }
  }

  for (std::size_t s = 0; s < n_train; ++s) {
    if (base_valid) result.validation_f1[config.schemes[s]] = validation[s];
  }
  return result;
}

CellResult rerun_cell(const ExperimentConfig& config, Scheme train, Scheme test) {
  const auto model = load_model_file(model_file(config, train));
  const auto gold = read_corpus_file(test_file(config, test), CorpusFormat::three_column);
  return score_cell(config, model, gold, train, test);
}

std::string emit_report(const MatrixResult& result, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::markdown: {
      out << "| Train | Test | F1-Score | Precision | Recall |\n";
      out << "|---|---|---|---|---|\n";
      for (const auto& c : result.cells) {
        out << "| " << scheme_display(c.train) << " | " << scheme_display(c.test) << " | ";
        if (c.ok()) {
          out << format_percent(c.report->micro_f1) << " | "
              << format_percent(c.report->micro_precision) << " | "
              << format_percent(c.report->micro_recall) << " |\n";
        } else {
          out << "failed | failed | failed |\n";
        }
      }
      break;
    }
    case ReportFormat::csv: {
      out << "train,test,f1,precision,recall,matched,gold,pred,status\n";
      for (const auto& c : result.cells) {
        out << scheme_name(c.train) << ',' << scheme_name(c.test) << ',';
        if (c.ok()) {
          out << format_percent(c.report->micro_f1) << ','
              << format_percent(c.report->micro_precision) << ','
              << format_percent(c.report->micro_recall) << ',' << c.report->matched << ','
              << c.report->gold_total << ',' << c.report->pred_total << ",ok\n";
        } else {
          out << ",,,,,,failed\n";
        }
      }
      break;
    }
    case ReportFormat::json: {
      ordered_json j;
      j["run_meta"] = {{"seed", result.seed}, {"config_hash", hex64(result.config_hash)}};
      ordered_json seeds = ordered_json::object();
      for (auto s : result.schemes) seeds[std::string(scheme_name(s))] = scheme_seed(result.seed, s);
      for (auto s : result.test_sets) {
        seeds[std::string(scheme_name(s))] = scheme_seed(result.seed, s);
      }
      j["run_meta"]["scheme_seeds"] = seeds;
      for (auto s : result.schemes) j["schemes"].push_back(scheme_name(s));
      for (auto s : result.test_sets) j["test_sets"].push_back(scheme_name(s));
      j["cells"] = ordered_json::array();
      for (const auto& c : result.cells) {
        ordered_json cell;
        cell["train"] = scheme_name(c.train);
        cell["test"] = scheme_name(c.test);
        cell["status"] = c.ok() ? "ok" : "failed";
        if (c.ok()) {
          cell["report"] = eval_json(*c.report);
          cell["token_accuracy"] = c.token_accuracy;
        } else {
          cell["error"] = c.error;
        }
        j["cells"].push_back(cell);
      }
      ordered_json valid = ordered_json::object();
      for (const auto& [scheme, f1s] : result.validation_f1) {
        valid[std::string(scheme_name(scheme))] = f1s;
      }
      j["validation_micro_f1"] = valid;
      out << j.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

MatrixResult parse_report_json(const std::string& text) {
  const auto j = json::parse(text);
  MatrixResult r;
  r.seed = j.at("run_meta").at("seed").get<std::uint64_t>();
  r.config_hash =
      std::stoull(j.at("run_meta").at("config_hash").get<std::string>(), nullptr, 16);
  for (const auto& s : j.at("schemes")) r.schemes.push_back(parse_scheme(s.get<std::string>()));
  for (const auto& s : j.at("test_sets")) {
    r.test_sets.push_back(parse_scheme(s.get<std::string>()));
  }
  for (const auto& c : j.at("cells")) {
    CellResult cell;
    cell.train = parse_scheme(c.at("train").get<std::string>());
    cell.test = parse_scheme(c.at("test").get<std::string>());
    if (c.at("status") == "ok") {
      cell.report = eval_from_json(c.at("report"));
      cell.token_accuracy = c.at("token_accuracy").get<double>();
    } else {
      cell.error = c.at("error").get<std::string>();
    }
    r.cells.push_back(std::move(cell));
  }
  for (const auto& [scheme, f1s] : j.at("validation_micro_f1").items()) {
    r.validation_f1[parse_scheme(scheme)] = f1s.get<std::vector<double>>();
  }
  return r;
}

void write_reports(const MatrixResult& result, const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  for (const auto f : config.report_formats) {
    write_text(config.output_dir / ("report." + std::string(format_extension(f))),
               emit_report(result, f));
  }
  ordered_json t = ordered_json::array();
  for (const auto& c : result.cells) {
    t.push_back({{"train", scheme_name(c.train)},
                 {"test", scheme_name(c.test)},
                 {"seconds", c.seconds}});
  }
  write_text(config.output_dir / "timings.json", t.dump(2) + "\n");
}

}  // namespace longner
