#include "belhd/evaluation.h"

#include <sstream>

#include "belhd/disambiguation.h"
#include "belhd/encoder.h"
#include "belhd/errors.h"
#include "belhd/retrieval.h"
#include "doctest.h"
#include "fixtures.h"

using namespace belhd;

namespace {

// Identity projection over a small hash space: mention and name embeddings
// are their feature vectors.
LinearEncoder identity_encoder(const Kb &kb) {
  FeatureConfig c;
  c.hash_dim = 1u << 10;
  c.context_weight = 0.0;
  std::vector<std::string> names;
  for (const auto &r : kb.records()) names.push_back(r.name);
  std::vector<double> w(std::size_t{c.hash_dim} * c.hash_dim, 0.0);
  for (std::uint32_t i = 0; i < c.hash_dim; ++i) w[std::size_t{i} * c.hash_dim + i] = 1.0;
  return LinearEncoder(Featurizer::Fit(c, names), c.hash_dim, 0, std::move(w));
}

}  // namespace

TEST_CASE("strict correctness") {
  CHECK(is_correct({1}, {1}));
  CHECK_FALSE(is_correct({1, 2}, {1}));
  CHECK(is_correct({2}, {1, 2}));
  CHECK_FALSE(is_correct({}, {1}));
}

TEST_CASE("recall@1 arithmetic") {
  const std::vector<std::set<EntityId>> predicted = {{1}, {2}, {3}, {4, 9}};
  const std::vector<std::set<EntityId>> gold = {{1}, {2}, {3}, {4}};
  const EvalReport r = recall_at_1(predicted, gold);
  CHECK(r.total == 4);
  CHECK(r.correct == 3);
  CHECK(r.recall_at_1 == 0.75);
  CHECK_FALSE(r.has_breakdown);

  const EvalReport split =
      recall_at_1(predicted, gold, std::vector<char>{0, 1, 0, 1});
  CHECK(split.has_breakdown);
  CHECK(split.affected_total == 2);
  CHECK(split.affected_correct == 1);
  CHECK(split.unaffected_correct == 2);

  const std::vector<std::set<EntityId>> none;
  try {
    recall_at_1(none, none);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()) == "no mentions to evaluate");
  }
  CHECK_THROWS_AS(recall_at_1(predicted, std::vector<std::set<EntityId>>{{1}}),
                  Error);
}

TEST_CASE("strict scoring never exceeds relaxed scoring") {
  const std::vector<std::set<EntityId>> predicted = {{1, 2}, {3}, {5, 6}};
  const std::vector<std::set<EntityId>> gold = {{1}, {4}, {6}};
  std::size_t relaxed = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (EntityId e : predicted[i]) relaxed += gold[i].count(e) > 0 ? 1 : 0;
  }
  CHECK(recall_at_1(predicted, gold).correct <= relaxed);
}

TEST_CASE("linking against raw and disambiguated KBs") {
  const Kb raw = fixtures::discharge_kb();
  const auto corpus = fixtures::corpus_from(
      R"({"id":"d","text":"Discharge was noted.","mentions":[{"start":0,"end":9,"gold":[600083]}]})"
      "\n");
  const LinearEncoder enc = identity_encoder(raw);
  const NameIndex raw_index = build_index(encode_kb(enc, raw), raw);
  const Prediction p = link(raw_index, enc, corpus[0], corpus[0].mentions[0]);
  CHECK(p.top_name == "Discharge");
  CHECK(p.entities == std::set<EntityId>{30685, 600083});
  CHECK_FALSE(is_correct(p.entities, p.gold));
  CHECK(link(raw_index, enc, corpus[0], corpus[0].mentions[0]) == p);

  const DisambiguatedKb hd = disambiguate(raw, nullptr);
  const NameIndex hd_index = build_index(encode_kb(enc, hd.kb), hd.kb);
  for (const auto &pred : link_corpus(hd_index, enc, corpus, 2)) {
    CHECK(pred.entities.size() == 1);
  }
  CHECK_THROWS_AS(link(NameIndex{}, enc, corpus[0], corpus[0].mentions[0]),
                  Error);
}

TEST_CASE("exact surfaces link to their unique names with an identity encoder") {
  const Kb kb = fixtures::kb_from(
      "1\t1\t0\tmotor tic disorder\t\n"
      "2\t2\t0\tvocal tic\t\n"
      "3\t3\t0\tTourette syndrome\t\n");
  const auto corpus = fixtures::corpus_from(
      R"({"id":"t","text":"Tourette syndrome with vocal tic and motor tic disorder.","mentions":[)"
      R"({"start":0,"end":17,"gold":[3]},{"start":23,"end":32,"gold":[2]},{"start":37,"end":55,"gold":[1]}]})"
      "\n");
  const LinearEncoder enc = identity_encoder(kb);
  const auto preds = link_corpus(build_index(encode_kb(enc, kb), kb), enc, corpus);
  CHECK(recall_at_1(preds).recall_at_1 == 1.0);
}

TEST_CASE("prediction table round trip") {
  const std::vector<Prediction> preds = {
      {"d1", 0, 9, {30685}, {30685, 600083}, "Discharge", 0.125},
      {"d1", 21, 38, {1, 2}, {2}, "Name (with, comma)", -1.0 / 3.0}};
  std::stringstream buf;
  write_predictions(preds, buf);
  CHECK(read_predictions(buf) == preds);
  std::stringstream bad("document\tstart\n");
  CHECK_THROWS_AS(read_predictions(bad), Error);
}

TEST_CASE("report writers") {
  const EvalReport r = recall_at_1(
      std::vector<std::set<EntityId>>{{1}, {2}},
      std::vector<std::set<EntityId>>{{1}, {3}}, std::vector<char>{1, 0});
  std::ostringstream kv, tsv;
  write_eval_kv(r, kv);
  write_eval_tsv(r, tsv);
  CHECK(kv.str().find("recall_at_1=0.5\n") != std::string::npos);
  CHECK(tsv.str().find("all\t2\t1\t0.5\n") != std::string::npos);
  CHECK(tsv.str().find("affected\t1\t1\t1\n") != std::string::npos);
}
