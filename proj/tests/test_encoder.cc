#include "belhd/encoder.h"

#include <cmath>
#include <random>
#include <sstream>

#include "belhd/errors.h"
#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"
#include "synthetic.h"

using namespace belhd;

namespace {

FeatureConfig small_config(std::uint32_t h = 1u << 12) {
  FeatureConfig c;
  c.hash_dim = h;
  return c;
}

Featurizer flat_featurizer(const FeatureConfig &c) {
  return Featurizer(c, std::vector<double>(c.half(), 1.0));
}

std::set<std::uint32_t> oracle_indices(const std::string &lower,
                                       const FeatureConfig &c,
                                       std::uint32_t offset) {
  std::set<std::uint32_t> out;
  for (const auto &g : oracle::ngrams(lower, c.min_n, c.max_n)) {
    out.insert(offset + static_cast<std::uint32_t>(oracle::fnv1a(g) % c.half()));
  }
  return out;
}

std::set<std::uint32_t> indices_in(const FeatureVector &fv, std::uint32_t lo,
                                   std::uint32_t hi) {
  std::set<std::uint32_t> out;
  for (auto i : fv.indices) {
    if (i >= lo && i < hi) out.insert(i);
  }
  return out;
}

}  // namespace

TEST_CASE("feature hash is 64-bit FNV-1a") {
  CHECK(feature_hash("") == 0xcbf29ce484222325ull);
  CHECK(feature_hash("a") == 0xaf63dc4c8601ec8cull);
  CHECK(feature_hash("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("bigrams of a short name") {
  FeatureConfig c = small_config();
  c.min_n = c.max_n = 2;
  const FeatureVector fv = flat_featurizer(c).featurize("ab");
  CHECK(fv.nnz() == 3);
  CHECK(indices_in(fv, 0, c.half()) == oracle_indices("ab", c, 0));
  CHECK(fv.norm() == doctest::Approx(c.span_weight()).epsilon(1e-12));
  CHECK(fv == flat_featurizer(c).featurize("AB"));
}

TEST_CASE("context lands in the upper half only") {
  const FeatureConfig c = small_config(1u << 16);
  const Featurizer f = flat_featurizer(c);
  const std::string sentence = "motor tic disorder";
  const MentionContext ctx{sentence, 6, 9};
  const FeatureVector plain = f.featurize("tic");
  const FeatureVector with = f.featurize("tic", &ctx);
  CHECK(indices_in(with, 0, c.half()) == indices_in(plain, 0, c.half()));
  CHECK(indices_in(plain, 0, c.half()) == oracle_indices("tic", c, 0));
  std::set<std::uint32_t> expected = oracle_indices("motor", c, c.half());
  for (auto i : oracle_indices("disorder", c, c.half())) expected.insert(i);
  CHECK(indices_in(with, c.half(), c.hash_dim) == expected);
  double context_sq = 0.0;
  for (std::size_t i = 0; i < with.nnz(); ++i) {
    if (with.indices[i] >= c.half()) context_sq += with.values[i] * with.values[i];
  }
  CHECK(std::sqrt(context_sq) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(with.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.featurize("tic", &ctx) == with);
}

TEST_CASE("context window keeps the nearest words") {
  FeatureConfig c = small_config(1u << 16);
  c.context_window = 1;
  const Featurizer f = flat_featurizer(c);
  const std::string sentence = "far near tic close away";
  const MentionContext ctx{sentence, 9, 12};
  std::set<std::uint32_t> expected = oracle_indices("near", c, c.half());
  for (auto i : oracle_indices("close", c, c.half())) expected.insert(i);
  CHECK(indices_in(f.featurize("tic", &ctx), c.half(), c.hash_dim) == expected);
}

TEST_CASE("idf is fitted on KB names") {
  const FeatureConfig c = small_config();
  const std::vector<std::string> names = {"ab", "ab", "cd"};
  const Featurizer f = Featurizer::Fit(c, names);
  const auto bucket = [&](const std::string &g) {
    return static_cast<std::size_t>(oracle::fnv1a(g) % c.half());
  };
  CHECK(f.idf()[bucket("\x02" "a")] ==
        doctest::Approx(std::log(4.0 / 3.0) + 1.0));
  CHECK(f.idf()[bucket("cd")] == doctest::Approx(std::log(4.0 / 2.0) + 1.0));
}

TEST_CASE("empty surfaces are rejected") {
  const Featurizer f = flat_featurizer(small_config());
  CHECK_THROWS_AS(f.featurize(""), Error);
  CHECK_THROWS_AS(f.featurize("  "), Error);
}

TEST_CASE("identity and zero projections") {
  FeatureConfig c = small_config(8);
  std::vector<double> identity(64, 0.0);
  for (int i = 0; i < 8; ++i) identity[i * 8 + i] = 1.0;
  const LinearEncoder id(flat_featurizer(c), 8, 0, identity);
  const FeatureVector onehot{8, {5}, {1.0}};
  CHECK(id.encode(onehot) == Embedding{0, 0, 0, 0, 0, 1, 0, 0});
  const LinearEncoder zero(flat_featurizer(c), 8, 0, std::vector<double>(64));
  CHECK(zero.encode(onehot) == Embedding(8, 0.0));
  CHECK_THROWS_AS(id.encode(FeatureVector{16, {1}, {1.0}}), DimensionError);
  CHECK_THROWS_AS(LinearEncoder(flat_featurizer(c), 8, 0, std::vector<double>(3)),
                  Error);
}

TEST_CASE("initialization is seeded and bounded") {
  const FeatureConfig c = small_config(1u << 10);
  const LinearEncoder a(flat_featurizer(c), 16, 9);
  const LinearEncoder b(flat_featurizer(c), 16, 9);
  const LinearEncoder other(flat_featurizer(c), 16, 10);
  CHECK(a == b);
  CHECK_FALSE(a.weights() == other.weights());
  const double bound = 1.0 / std::sqrt(1024.0);
  for (double w : a.weights()) CHECK(std::abs(w) <= bound);
}

TEST_CASE("property: encode is linear") {
  const FeatureConfig c = small_config();
  const LinearEncoder enc(flat_featurizer(c), 32, 1);
  const Featurizer &f = enc.featurizer();
  std::mt19937_64 rng(2);
  const std::vector<std::string> texts = {"motor tic", "A2M", "discharge",
                                          "α2microglobulin", "IGHA2"};
  for (int t = 0; t < 50; ++t) {
    const FeatureVector x = f.featurize(texts[rng() % texts.size()]);
    const FeatureVector y = f.featurize(texts[rng() % texts.size()]);
    const double alpha = static_cast<double>(rng() % 1000) / 100.0 - 5.0;
    const double beta = static_cast<double>(rng() % 1000) / 100.0 - 5.0;
    const Embedding lhs = enc.encode(FeatureVector::Combine(x, alpha, y, beta));
    const Embedding ex = enc.encode(x), ey = enc.encode(y);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double rhs = alpha * ex[i] + beta * ey[i];
      CHECK(std::abs(lhs[i] - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
    CHECK(lhs.size() == 32);
  }
}

TEST_CASE("KB encoding tracks weight updates") {
  const Kb kb = fixtures::discharge_kb();
  std::vector<std::string> names;
  for (const auto &r : kb.records()) names.push_back(r.name);
  LinearEncoder enc(Featurizer::Fit(small_config(), names), 16, 4);
  const DenseMatrix first = encode_kb(enc, kb, 2);
  CHECK(first.rows() == 4);
  CHECK(first.cols() == 16);
  CHECK(encode_kb(enc, kb, 1) == first);
  for (double &w : enc.weights()) w *= 1.5;
  enc.weights()[7] += 0.25;
  const DenseMatrix second = encode_kb(enc, kb);
  for (std::size_t r = 0; r < kb.size(); ++r) {
    const Embedding e = enc.encode_text(kb.records()[r].name);
    for (std::size_t i = 0; i < 16; ++i) CHECK(second.row(r)[i] == e[i]);
  }
}

TEST_CASE("checkpoint round trip") {
  const std::vector<std::string> names = {"alpha", "beta"};
  FeatureConfig c = small_config(1u << 8);
  c.context_window = 3;
  c.context_weight = 0.5;
  const LinearEncoder enc(Featurizer::Fit(c, names), 4, 77);
  std::stringstream buf;
  enc.save(buf);
  CHECK(LinearEncoder::Load(buf) == enc);
  std::stringstream bad("BELHDXXX");
  CHECK_THROWS_AS(LinearEncoder::Load(bad), Error);
  std::string truncated;
  {
    std::stringstream again;
    enc.save(again);
    truncated = again.str().substr(0, 100);
  }
  std::stringstream cut(truncated);
  CHECK_THROWS_AS(LinearEncoder::Load(cut), Error);
}

TEST_CASE("collision rate on 10k distinct names stays below 1%") {
  synthetic::Rng rng(21);
  synthetic::NamePool pool(rng);
  std::vector<std::string> names;
  for (int i = 0; i < 10000; ++i) {
    names.push_back(pool.word(2, 3) + (i % 3 == 0 ? " " + pool.word(1, 2) : ""));
  }
  const Featurizer f = Featurizer::Fit(FeatureConfig{}, names);
  std::map<std::vector<std::uint32_t>, int> seen;
  for (const auto &n : names) ++seen[f.featurize(n).indices];
  std::size_t collided = 0;
  for (const auto &[indices, count] : seen) {
    if (count > 1) collided += static_cast<std::size_t>(count);
  }
  CHECK(static_cast<double>(collided) / names.size() < 0.01);
}
