#include "longner/trainer.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "longner/decoder.hpp"
#include "longner/error.hpp"
#include "longner/features.hpp"
#include "longner/rng.hpp"

namespace longner {
namespace {

struct PendingUpdate {
  std::size_t sentence = 0;
  std::vector<std::size_t> gold;
  std::vector<std::size_t> pred;
};

}  // namespace

void check_train_config(const TrainConfig& config) {
  if (config.epochs < 1) throw Error(ErrorCode::InvalidConfig, "epochs must be >= 1");
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorCode::InvalidConfig, "learning_rate must be a positive number");
  }
  if (config.batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch_size must be >= 1");
}

WeightAverager::WeightAverager(const TaggerModel& shape) : acc_(shape.labels()) {}

void WeightAverager::add_emission(TaggerModel& weights, const std::string& feature,
                                  std::size_t tag, double delta, std::uint64_t visit) {
  weights.emission_row(feature)[tag] += delta;
  acc_.emission_row(feature)[tag] += delta * static_cast<double>(visit - 1);
}

void WeightAverager::add_transition(TaggerModel& weights, std::size_t prev, std::size_t next,
                                    double delta, std::uint64_t visit) {
  weights.transition(prev, next) += delta;
  acc_.transition(prev, next) += delta * static_cast<double>(visit - 1);
}

TaggerModel WeightAverager::average(const TaggerModel& weights, std::uint64_t visits) const {
  TaggerModel out(weights.labels());
  const double total = static_cast<double>(visits);
  for (const auto& [feature, row] : weights.emissions()) {
    const auto* acc = acc_.emission(feature);
    auto& dst = out.emission_row(feature);
    for (std::size_t t = 0; t < row.size(); ++t) {
      dst[t] = row[t] - (acc ? (*acc)[t] / total : 0.0);
    }
  }
  for (std::size_t p = 0; p < weights.tag_count(); ++p) {
    for (std::size_t n = 0; n < weights.tag_count(); ++n) {
      out.transition(p, n) = weights.transition(p, n) - acc_.transition(p, n) / total;
    }
  }
  out.prune();
  out.averaged = true;
  return out;
}

TaggerModel train(const Corpus& corpus, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  check_train_config(config);
  if (corpus.sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");

  std::vector<std::string> labels;
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tags) labels.push_back(format_tag(t));
  }
  TaggerModel weights(labels);
  WeightAverager averager(weights);

  // gold paths as tag indices
  std::vector<std::vector<std::size_t>> gold(corpus.sentences.size());
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    for (const auto& t : corpus.sentences[s].tags) {
      gold[s].push_back(*weights.index_of(format_tag(t)));
    }
  }

  const double lr = config.learning_rate;
  std::uint64_t visit = 0;
  std::vector<PendingUpdate> pending;

  auto apply_pending = [&] {
    for (const auto& u : pending) {
      std::span<const std::string> tokens(corpus.sentences[u.sentence].tokens);
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (u.gold[i] != u.pred[i]) {
          for (const auto& f : extract_features(tokens, i)) {
            averager.add_emission(weights, f, u.gold[i], lr, visit);
            averager.add_emission(weights, f, u.pred[i], -lr, visit);
          }
        }
        if (i > 0 && (u.gold[i - 1] != u.pred[i - 1] || u.gold[i] != u.pred[i])) {
          averager.add_transition(weights, u.gold[i - 1], u.gold[i], lr, visit);
          averager.add_transition(weights, u.pred[i - 1], u.pred[i], -lr, visit);
        }
      }
    }
    pending.clear();
  };

  const auto batch = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order(corpus.sentences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(config.shuffle_seed + static_cast<std::uint64_t>(epoch));
    rng.shuffle(std::span(order));

    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const auto s = order[pos];
      ++visit;
      auto pred = viterbi(weights, corpus.sentences[s].tokens, false).path;
      if (pred != gold[s]) pending.push_back({s, gold[s], std::move(pred)});
      if ((pos + 1) % batch == 0 || pos + 1 == order.size()) apply_pending();
    }
    if (on_epoch) on_epoch(epoch, averager.average(weights, visit));
  }

  auto model = averager.average(weights, visit);
  model.meta = TrainMeta{config.epochs, config.shuffle_seed, kFeatureTemplateVersion};
  return model;
}

}  // namespace longner
