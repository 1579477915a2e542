#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <random>

#include "doctest.h"
#include "longner/decoder.hpp"
#include "longner/error.hpp"
#include "longner/evaluator.hpp"
#include "longner/features.hpp"
#include "longner/model.hpp"
#include "longner/rng.hpp"
#include "longner/trainer.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/random_model.hpp"

using namespace longner;

namespace {

bool has(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

const std::vector<std::string> kAllLabels{"O",     "B-NEM", "B-NEP", "B-NEL", "B-NEO",
                                          "B-NED", "I-NEP", "I-NEO", "I-NEM", "B-ED",
                                          "B-NETI", "I-NED", "I-NEL", "I-ED", "I-NETI"};

}  // namespace

TEST_CASE("extract_features boundary sentinels and shapes") {
  Sentence one{0, {"राम"}, {Tag::outside()}, {}};
  const auto f = extract_features(one, 0);
  CHECK(has(f, "bias"));
  CHECK(has(f, "w=राम"));
  CHECK(has(f, "prev=<s>"));
  CHECK(has(f, "next=</s>"));
  CHECK(has(f, "shape:deva"));
  CHECK_FALSE(has(f, "shape:digit"));
  // "राम" is three scalars: र ा म
  CHECK(has(f, "pre3=राम"));
  CHECK(has(f, "suf1=म"));
  CHECK_FALSE(has(f, "pre4=राम"));

  Sentence year{0, {"१९४७"}, {Tag::outside()}, {}};
  CHECK(has(extract_features(year, 0), "shape:digit"));

  Sentence two{0, {"IPL", "2023"}, {Tag::outside(), Tag::outside()}, {}};
  const auto f1 = extract_features(two, 1);
  CHECK(has(f1, "prev=IPL"));
  CHECK(has(f1, "shape:digit"));
  CHECK(has(extract_features(two, 0), "shape:latin"));

  try {
    extract_features(two, 2);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("model tag list is canonical") {
  TaggerModel m(std::vector<std::string>{"INEP", "BNEP", "B-ED"});
  CHECK(m.labels() == std::vector<std::string>{"B-ED", "B-NEP", "I-NEP", "O"});
  CHECK(m.index_of("O") == 3u);
  CHECK_FALSE(m.index_of("B-NEL").has_value());
}

TEST_CASE("all-zero weights decode to the smallest label") {
  TaggerModel m(kAllLabels);
  REQUIRE(m.labels().front() == "B-ED");
  Sentence s{0, {"a", "b", "c"}, {}, {}};
  for (const auto& t : viterbi_decode(m, s, false)) CHECK(format_tag(t) == "B-ED");
  const auto constrained = viterbi_decode(m, s, true);
  CHECK(constrained[0].prefix != Prefix::I);

  TaggerModel inside_first(std::vector<std::string>{"I-ED", "B-NEP"});
  // labels: B-NEP, I-ED, O
  Sentence one{0, {"x"}, {}, {}};
  CHECK(format_tag(viterbi_decode(inside_first, one, true)[0]) == "B-NEP");
}

TEST_CASE("empty model is rejected") {
  TaggerModel empty;
  Sentence s{0, {"a"}, {}, {}};
  try {
    viterbi_decode(empty, s);
    FAIL("expected EmptyModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyModel);
  }
}

TEST_CASE("viterbi matches exhaustive enumeration") {
  std::mt19937_64 rng(1234);
  const auto& vocab = testing::vocabulary();
  for (int trial = 0; trial < 200; ++trial) {
    const auto len = testing::uniform(rng, 1, 4);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < len; ++i) tokens.push_back(vocab[testing::uniform(rng, 0, vocab.size() - 1)]);
    const bool integer = trial % 2 == 0;
    const auto model = testing::random_model(rng, tokens, testing::uniform(rng, 2, 5), integer);
    for (bool constrain : {false, true}) {
      const auto got = viterbi(model, tokens, constrain);
      const auto oracle = testing::enumerate_best(model, tokens, constrain);
      const double attained = testing::oracle_sequence_score(model, tokens, got.path);
      if (integer) {
        CHECK(got.score == oracle.best);
        CHECK(attained == oracle.best);
        // ties resolve to the sequence that is smallest when read from the end
        auto reversed = oracle.argmax;
        for (auto& p : reversed) std::reverse(p.begin(), p.end());
        auto expected = *std::min_element(reversed.begin(), reversed.end());
        std::reverse(expected.begin(), expected.end());
        CHECK(got.path == expected);
      } else {
        CHECK(got.score == doctest::Approx(oracle.best).epsilon(1e-12));
        CHECK(attained == doctest::Approx(oracle.best).epsilon(1e-12));
      }
      if (constrain) CHECK(testing::oracle_iob_ok(model, got.path));
      CHECK(path_score(model, tokens, got.path) == doctest::Approx(attained));
    }
  }
}

TEST_CASE("training on an all-O corpus predicts O") {
  Corpus c;
  c.sentences.push_back({0, {"a", "b"}, {Tag::outside(), Tag::outside()}, {}});
  c.sentences.push_back({1, {"c"}, {Tag::outside()}, {}});
  const auto m = train(c, TrainConfig{});
  const auto pred = predict_corpus(m, c);
  for (const auto& s : pred.sentences) {
    for (const auto& t : s.tags) CHECK(t.is_outside());
  }
}

TEST_CASE("training is deterministic") {
  std::mt19937_64 rng(5);
  const auto lang = testing::separable_language(3, 6);
  const auto c = testing::separable_corpus(rng, lang, 60, 3, 10);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.shuffle_seed = 77;
  CHECK(save_model(train(c, cfg)) == save_model(train(c, cfg)));
  cfg.batch_size = 4;
  CHECK(save_model(train(c, cfg)) == save_model(train(c, cfg)));
}

TEST_CASE("separable corpus is learned perfectly within five epochs") {
  std::mt19937_64 rng(500);
  const auto lang = testing::separable_language(5, 10);
  REQUIRE(lang.vocabulary_size() == 20);
  const auto c = testing::separable_corpus(rng, lang, 500, 2, 12);
  TrainConfig cfg;
  cfg.epochs = 5;
  const auto m = train(c, cfg);
  const auto report = evaluate(c, predict_corpus(m, c));
  CHECK(report.micro_f1 == 1.0);
}

TEST_CASE("invalid training inputs") {
  Corpus c;
  try {
    train(c, TrainConfig{});
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
  c.sentences.push_back({0, {"a"}, {Tag::outside()}, {}});
  for (auto bad : {TrainConfig{0, 0, 1.0, 1}, TrainConfig{1, 0, 0.0, 1}, TrainConfig{1, 0, 1.0, 0}}) {
    try {
      train(c, bad);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  }
}

TEST_CASE("averaging carries an update by its survival fraction") {
  TaggerModel shape(std::vector<std::string>{"B-NEP"});
  SUBCASE("weight averager") {
    for (std::uint64_t total = 1; total <= 6; ++total) {
      for (std::uint64_t step = 1; step <= total; ++step) {
        TaggerModel weights = shape;
        WeightAverager avg(shape);
        avg.add_emission(weights, "w=x", 0, 2.5, step);
        avg.add_transition(weights, 0, 1, -1.0, step);
        const auto m = avg.average(weights, total);
        const double fraction = static_cast<double>(total - step + 1) / static_cast<double>(total);
        CHECK((*m.emission("w=x"))[0] == doctest::Approx(2.5 * fraction));
        CHECK(m.transition(0, 1) == doctest::Approx(-fraction));
      }
    }
  }
  SUBCASE("train matches an explicit mean of per-visit weight snapshots") {
    std::mt19937_64 rng(31);
    const auto lang = testing::separable_language(3, 4);
    const auto c = testing::separable_corpus(rng, lang, 12, 2, 7);
    const TrainConfig cfg{3, 11, 0.75, 1};

    std::vector<std::string> labels;
    for (const auto& s : c.sentences) {
      for (const auto& t : s.tags) labels.push_back(format_tag(t));
    }
    TaggerModel w(labels);
    const auto n = w.tag_count();
    std::map<std::string, std::vector<double>> emission_sum;
    std::vector<double> transition_sum(n * n, 0.0);
    std::uint64_t visits = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      std::vector<std::size_t> order(c.sentences.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      SplitMix64 shuffler(cfg.shuffle_seed + static_cast<std::uint64_t>(epoch));
      shuffler.shuffle(std::span(order));
      for (const auto s : order) {
        const auto& sent = c.sentences[s];
        std::vector<std::size_t> gold;
        for (const auto& t : sent.tags) gold.push_back(*w.index_of(format_tag(t)));
        const auto pred = viterbi(w, sent.tokens, false).path;
        if (pred != gold) {
          for (std::size_t i = 0; i < gold.size(); ++i) {
            if (gold[i] != pred[i]) {
              for (const auto& f : extract_features(sent.tokens, i)) {
                w.emission_row(f)[gold[i]] += cfg.learning_rate;
                w.emission_row(f)[pred[i]] -= cfg.learning_rate;
              }
            }
            if (i > 0 && (gold[i - 1] != pred[i - 1] || gold[i] != pred[i])) {
              w.transition(gold[i - 1], gold[i]) += cfg.learning_rate;
              w.transition(pred[i - 1], pred[i]) -= cfg.learning_rate;
            }
          }
        }
        ++visits;
        for (const auto& [f, row] : w.emissions()) {
          auto& acc = emission_sum[f];
          acc.resize(n, 0.0);
          for (std::size_t t = 0; t < n; ++t) acc[t] += row[t];
        }
        for (std::size_t p = 0; p < n; ++p) {
          for (std::size_t q = 0; q < n; ++q) transition_sum[p * n + q] += w.transition(p, q);
        }
      }
    }

    const auto m = train(c, cfg);
    REQUIRE(m.labels() == w.labels());
    for (const auto& [f, acc] : emission_sum) {
      const auto* row = m.emission(f);
      for (std::size_t t = 0; t < n; ++t) {
        const double expected = acc[t] / static_cast<double>(visits);
        CHECK((row ? (*row)[t] : 0.0) == doctest::Approx(expected));
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        CHECK(m.transition(p, q) ==
              doctest::Approx(transition_sum[p * n + q] / static_cast<double>(visits)));
      }
    }
  }
}

TEST_CASE("model file round trip and errors") {
  std::mt19937_64 rng(8);
  const auto lang = testing::separable_language(2, 4);
  const auto c = testing::separable_corpus(rng, lang, 20, 2, 6);
  const auto m = train(c, TrainConfig{2, 3, 0.7, 1});
  const auto text = save_model(m);
  CHECK(text.starts_with("ner-model-v1\ntags\t"));
  const auto back = load_model_text(text);
  CHECK(save_model(back) == text);
  CHECK(back.meta == m.meta);

  const auto empty = load_model_text("ner-model-v1\ntags\tB-NEP\tO\n");
  CHECK(empty.labels() == std::vector<std::string>{"B-NEP", "O"});
  CHECK(empty.emissions().empty());

  auto expect = [](const std::string& text, ErrorCode code) {
    try {
      load_model_text(text);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  expect("ner-model-v2\ntags\tO\n", ErrorCode::UnknownVersion);
  expect("hello\n", ErrorCode::MalformedModelFile);
  expect("ner-model-v1\ntags\tO\nE\tbias\tO\tabc\n", ErrorCode::MalformedModelFile);
  expect("ner-model-v1\ntags\tO\nE\tbias\tB-NEP\t1\n", ErrorCode::MalformedModelFile);
  expect("ner-model-v1\ntags\tO\nT\tO\tO\t1\tx\n", ErrorCode::MalformedModelFile);
}

TEST_CASE("predict_corpus keeps ids and tokens; constrained output is IOB-valid") {
  std::mt19937_64 rng(31);
  CHECK(predict_corpus(TaggerModel(kAllLabels), Corpus{}).sentences.empty());
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testing::random_corpus(rng);
    std::vector<std::string> probe;
    for (const auto& s : c.sentences) probe.insert(probe.end(), s.tokens.begin(), s.tokens.end());
    const auto model = testing::random_model(rng, probe, 5, false);
    const auto pred = predict_corpus(model, c, true);
    REQUIRE(pred.sentences.size() == c.sentences.size());
    for (std::size_t i = 0; i < c.sentences.size(); ++i) {
      CHECK(pred.sentences[i].id == c.sentences[i].id);
      CHECK(pred.sentences[i].tokens == c.sentences[i].tokens);
    }
    CHECK(validate_iob(pred).empty());
    CHECK(pred.sentences == serial::predict_corpus(model, c, true).sentences);
  }
}
