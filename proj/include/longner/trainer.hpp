#pragma once

#include <cstdint>
#include <functional>

#include "longner/corpus.hpp"
#include "longner/model.hpp"

namespace longner {

struct TrainConfig {
  int epochs = 5;
  std::uint64_t shuffle_seed = 0;
  double learning_rate = 1.0;  // perceptron step size
  int batch_size = 1;          // sentences decoded before updates are applied
};

// Throws Error{InvalidConfig}.
void check_train_config(const TrainConfig& config);

// Called after each epoch (0-based) with the averaged weights so far.
using EpochCallback = std::function<void(int epoch, const TaggerModel& averaged)>;

// Averaged structured perceptron. Epoch e visits sentences in the order
// given by shuffling with seed shuffle_seed + e; mistakes add
// learning_rate * (gold - predicted) feature counts. The returned model holds
// the mean of the weights recorded after every sentence visit.
// Throws Error{EmptyCorpus} or Error{InvalidConfig}.
TaggerModel train(const Corpus& corpus, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

// Running sums behind the averaging. With an update of size d applied at
// visit s (1-based) out of T visits, the average carries d * (T - s + 1) / T.
class WeightAverager {
 public:
  explicit WeightAverager(const TaggerModel& shape);

  void add_emission(TaggerModel& weights, const std::string& feature, std::size_t tag,
                    double delta, std::uint64_t visit);
  void add_transition(TaggerModel& weights, std::size_t prev, std::size_t next, double delta,
                      std::uint64_t visit);

  // Mean of the weights after visits 1..visits.
  TaggerModel average(const TaggerModel& weights, std::uint64_t visits) const;

 private:
  TaggerModel acc_;
};

}  // namespace longner
