#include <random>

#include "doctest.h"
#include "longner/error.hpp"
#include "longner/evaluator.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace longner;

namespace {

std::vector<Tag> tags_of(std::initializer_list<const char*> labels) {
  std::vector<Tag> out;
  for (const auto* l : labels) out.push_back(parse_tag(l));
  return out;
}

Corpus one_sentence(std::vector<Tag> tags) {
  Corpus c;
  c.sentences.push_back({0, std::vector<std::string>(tags.size(), "w"), std::move(tags), {}});
  return c;
}

}  // namespace

TEST_CASE("extract_spans examples") {
  CHECK(extract_spans(tags_of({"O", "O", "O"})).spans.empty());
  CHECK(extract_spans(tags_of({"B-NEP", "I-NEP", "O", "B-NEL"})).spans ==
        std::vector<EntitySpan>{{"NEP", 0, 1}, {"NEL", 3, 3}});
  const auto orphan = tags_of({"O", "I-NEP", "I-NEP"});
  const auto lenient = extract_spans(orphan, SpanMode::lenient);
  const auto strict = extract_spans(orphan, SpanMode::strict);
  CHECK(lenient.spans == std::vector<EntitySpan>{{"NEP", 1, 2}});
  CHECK(lenient.violations.empty());
  CHECK(strict.spans == lenient.spans);
  CHECK(strict.violations == std::vector<std::size_t>{1});
  CHECK(extract_spans(tags_of({"B-NEP", "I-NEL", "B-NEP", "B-NEP"})).spans ==
        std::vector<EntitySpan>{{"NEP", 0, 0}, {"NEL", 1, 1}, {"NEP", 2, 2}, {"NEP", 3, 3}});
}

TEST_CASE("evaluate hand-computed example") {
  const auto gold = one_sentence(tags_of({"B-NEP", "I-NEP", "O", "O"}));
  const auto pred = one_sentence(tags_of({"B-NEP", "I-NEP", "O", "B-NEL"}));
  const auto r = evaluate(gold, pred);
  CHECK(r.micro_precision == 0.5);
  CHECK(r.micro_recall == 1.0);
  CHECK(r.micro_f1 == doctest::Approx(2.0 / 3.0));
  CHECK(format_percent(r.micro_f1) == "66.67");
  CHECK(r.per_type.at("NEL").pred_support == 1);
  CHECK(r.per_type.at("NEL").gold_support == 0);
  CHECK(r.per_type.at("NEP").f1 == 1.0);
  CHECK(r.matched <= std::min(r.gold_total, r.pred_total));
}

TEST_CASE("perfect prediction and empty cases") {
  std::mt19937_64 rng(3);
  const auto c = testing::random_corpus(rng, {5, 10, 3, 10, false});
  const auto r = evaluate(c, c);
  if (r.gold_total > 0) {
    CHECK(r.micro_f1 == 1.0);
    for (const auto& [type, s] : r.per_type) CHECK(s.f1 == 1.0);
  }
  const auto none = one_sentence(tags_of({"O"}));
  CHECK(evaluate(none, none).micro_f1 == 0.0);
  CHECK(token_accuracy(Corpus{}, Corpus{}) == 1.0);
}

TEST_CASE("token accuracy documents the O imbalance") {
  std::vector<Tag> gold(10, Tag::outside());
  gold[3] = Tag::begin("NEP");
  const auto r = token_accuracy(one_sentence(gold), one_sentence(std::vector<Tag>(10)));
  CHECK(r == doctest::Approx(0.9));
}

TEST_CASE("misaligned corpora are rejected") {
  auto gold = one_sentence(tags_of({"O", "O"}));
  auto pred = gold;
  pred.sentences[0].tokens[1] = "v";
  auto expect_misaligned = [&](const Corpus& p) {
    try {
      evaluate(gold, p);
      FAIL("expected Misaligned");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Misaligned);
    }
  };
  expect_misaligned(pred);
  pred = gold;
  pred.sentences[0].id = 4;
  expect_misaligned(pred);
  pred = gold;
  pred.sentences.push_back(gold.sentences[0]);
  expect_misaligned(pred);
  CHECK_THROWS_AS(token_accuracy(gold, pred), Error);
}

TEST_CASE("evaluator agrees with the brute-force span-set oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    Corpus gold, pred;
    const auto sentences = testing::uniform(rng, 1, 4);
    testing::OracleCounts oracle;
    for (std::size_t s = 0; s < sentences; ++s) {
      const auto n = testing::uniform(rng, 1, 12);
      auto g = testing::random_any_tags(rng, n, 3);
      auto p = testing::random_any_tags(rng, n, 3);
      testing::accumulate(oracle, g, p);
      gold.sentences.push_back({s, std::vector<std::string>(n, "w"), g, {}});
      pred.sentences.push_back({s, std::vector<std::string>(n, "w"), p, {}});
    }
    const auto r = evaluate(gold, pred);
    const auto micro = testing::oracle_prf(oracle.matched, oracle.gold, oracle.pred);
    CHECK(r.micro_precision == micro[0]);
    CHECK(r.micro_recall == micro[1]);
    CHECK(r.micro_f1 == micro[2]);
    CHECK(r.per_type.size() == oracle.per_type.size());
    for (const auto& [type, c] : oracle.per_type) {
      const auto expected = testing::oracle_prf(c[0], c[1], c[2]);
      const auto& got = r.per_type.at(type);
      CHECK(got.precision == expected[0]);
      CHECK(got.recall == expected[1]);
      CHECK(got.f1 == expected[2]);
    }
    // swapping roles swaps precision and recall
    const auto swapped = evaluate(pred, gold);
    CHECK(swapped.micro_precision == r.micro_recall);
    CHECK(swapped.micro_recall == r.micro_precision);
    CHECK(r == serial::evaluate(gold, pred));
  }
}

TEST_CASE("removing a correct predicted span") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = testing::uniform(rng, 2, 12);
    auto g = testing::random_valid_tags(rng, n, 3);
    auto p = g;
    // perturb part of the prediction
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 4 == 0) p[i] = testing::random_valid_tags(rng, 1, 3)[0];
    }
    repair_iob(p);
    const auto before = evaluate(one_sentence(g), one_sentence(p));
    const auto spans = extract_spans(p).spans;
    const auto gold_spans = extract_spans(g).spans;
    for (const auto& span : spans) {
      if (std::find(gold_spans.begin(), gold_spans.end(), span) == gold_spans.end()) continue;
      auto q = p;
      for (auto i = span.start; i <= span.end; ++i) q[i] = Tag::outside();
      const auto after = evaluate(one_sentence(g), one_sentence(q));
      CHECK(after.micro_recall <= before.micro_recall);
      CHECK(after.matched + 1 == before.matched);
      CHECK(after.pred_total + 1 == before.pred_total);
      ++checked;
      break;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("report renderings") {
  const auto gold = one_sentence(tags_of({"B-NEP", "I-NEP", "O", "O"}));
  const auto r = evaluate(gold, gold, SpanMode::strict);
  const auto json = eval_to_json(r);
  CHECK(json.find("\"mode\": \"strict\"") != std::string::npos);
  CHECK(eval_to_table(r).find("100.00") != std::string::npos);
}
