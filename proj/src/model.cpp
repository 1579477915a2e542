#include "longner/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "longner/error.hpp"

namespace longner {
namespace {

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::MalformedModelFile,
              "model line " + std::to_string(line_no) + ": " + msg);
}

double parse_weight(std::string_view text, std::size_t line_no) {
  double w = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, w);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(w)) {
    malformed(line_no, "weight is not a finite number: '" + std::string(text) + "'");
  }
  return w;
}

}  // namespace

TaggerModel::TaggerModel(const std::vector<std::string>& labels) {
  std::vector<std::string> canon{"O"};
  for (const auto& l : labels) canon.push_back(format_tag(parse_tag(l)));
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
  labels_ = std::move(canon);
  for (const auto& l : labels_) tags_.push_back(parse_tag(l));
  transitions_.assign(labels_.size() * labels_.size(), 0.0);
}

std::optional<std::size_t> TaggerModel::index_of(std::string_view label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

const std::vector<double>* TaggerModel::emission(const std::string& feature) const {
  const auto it = emissions_.find(feature);
  return it == emissions_.end() ? nullptr : &it->second;
}

std::vector<double>& TaggerModel::emission_row(const std::string& feature) {
  auto [it, inserted] = emissions_.try_emplace(feature);
  if (inserted) it->second.assign(labels_.size(), 0.0);
  return it->second;
}

void TaggerModel::prune() {
  std::erase_if(emissions_, [](const auto& kv) {
    return std::all_of(kv.second.begin(), kv.second.end(), [](double w) { return w == 0.0; });
  });
}

void save_model(std::ostream& out, const TaggerModel& model) {
  out << kModelVersion << '\n';
  out << "tags";
  for (const auto& l : model.labels()) out << '\t' << l;
  out << '\n';
  if (model.meta) {
    out << "meta\tepochs=" << model.meta->epochs << "\tseed=" << model.meta->seed
        << "\tfeatures=" << model.meta->feature_version
        << "\taveraged=" << (model.averaged ? 1 : 0) << '\n';
  }

  std::vector<std::string> lines;
  const auto& labels = model.labels();
  for (const auto& [feature, row] : model.emissions()) {
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (row[t] != 0.0) {
        lines.push_back("E\t" + feature + '\t' + labels[t] + '\t' + format_weight(row[t]));
      }
    }
  }
  for (std::size_t p = 0; p < labels.size(); ++p) {
    for (std::size_t n = 0; n < labels.size(); ++n) {
      if (const double w = model.transition(p, n); w != 0.0) {
        lines.push_back("T\t" + labels[p] + '\t' + labels[n] + '\t' + format_weight(w));
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << '\n';
}

std::string save_model(const TaggerModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

TaggerModel load_model_text(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::MalformedModelFile, "empty model file");
  if (lines[0] != kModelVersion) {
    if (lines[0].starts_with("ner-model-")) {
      throw Error(ErrorCode::UnknownVersion,
                  "unsupported model version: " + std::string(lines[0]));
    }
    throw Error(ErrorCode::MalformedModelFile, "missing model version header");
  }
  if (lines.size() < 2) malformed(2, "missing tag line");
  const auto tag_fields = split_tabs(lines[1]);
  if (tag_fields.empty() || tag_fields[0] != "tags") malformed(2, "expected tag line");

  TaggerModel model;
  try {
    model = TaggerModel(std::vector<std::string>(tag_fields.begin() + 1, tag_fields.end()));
  } catch (const Error& e) {
    malformed(2, e.what());
  }

  std::size_t i = 2;
  if (i < lines.size() && lines[i].starts_with("meta\t")) {
    TrainMeta meta;
    const auto fields = split_tabs(lines[i]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto eq = fields[k].find('=');
      if (eq == std::string_view::npos) malformed(i + 1, "bad meta field");
      const auto key = fields[k].substr(0, eq);
      const auto value = std::string(fields[k].substr(eq + 1));
      try {
        if (key == "epochs") meta.epochs = std::stoi(value);
        else if (key == "seed") meta.seed = std::stoull(value);
        else if (key == "features") meta.feature_version = std::stoi(value);
        else if (key == "averaged") model.averaged = value == "1";
        else malformed(i + 1, "unknown meta key");
      } catch (const std::logic_error&) {
        malformed(i + 1, "bad meta value");
      }
    }
    model.meta = meta;
    ++i;
  }

  std::vector<bool> seen_transition(model.tag_count() * model.tag_count(), false);
  for (; i < lines.size(); ++i) {
    const auto line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto f = split_tabs(lines[i]);
    if (f.size() != 4) malformed(line_no, "expected 4 fields");
    const double w = parse_weight(f[3], line_no);
    if (f[0] == "E") {
      const auto tag = model.index_of(f[2]);
      if (!tag) malformed(line_no, "unknown tag " + std::string(f[2]));
      const std::string feature(f[1]);
      const bool fresh = model.emission(feature) == nullptr;
      auto& row = model.emission_row(feature);
      if (!fresh && row[*tag] != 0.0) malformed(line_no, "duplicate weight");
      row[*tag] = w;
    } else if (f[0] == "T") {
      const auto prev = model.index_of(f[1]);
      const auto next = model.index_of(f[2]);
      if (!prev || !next) malformed(line_no, "unknown tag in transition");
      const auto key = *prev * model.tag_count() + *next;
      if (seen_transition[key]) malformed(line_no, "duplicate transition");
      seen_transition[key] = true;
      model.transition(*prev, *next) = w;
    } else {
      malformed(line_no, "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  return model;
}

TaggerModel load_model(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_model_text(text);
}

void save_model_file(const std::filesystem::path& path, const TaggerModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  save_model(out, model);
}

TaggerModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace longner
