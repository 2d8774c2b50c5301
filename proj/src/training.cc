#include "belhd/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "belhd/errors.h"
#include "belhd/parallel.h"

namespace belhd {
namespace {

double log_sum_exp(std::span<const double> scores,
                   std::span<const char> mask = {}) {
  double max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask.empty() || mask[i]) max = std::max(max, scores[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask.empty() || mask[i]) sum += std::exp(scores[i] - max);
  }
  return max + std::log(sum);
}

// Contributions of one example before averaging.
struct ExampleGradient {
  std::optional<double> loss;
  std::vector<std::pair<std::uint32_t, std::vector<double>>> rows;
};

ExampleGradient example_gradient(const LinearEncoder &encoder,
                                 const TrainExample &ex) {
  ExampleGradient out;
  const std::size_t n = ex.candidates.size();
  if (n == 0 || ex.positive.size() != n) {
    throw Error("training example needs one positive flag per candidate");
  }
  if (std::none_of(ex.positive.begin(), ex.positive.end(),
                   [](char p) { return p != 0; })) {
    return out;
  }
  const std::size_t p = encoder.projection_dim();
  const Embedding m = encoder.encode(ex.mention);
  DenseMatrix c(n, p);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    encoder.encode_into(*ex.candidates[i], c.row(i));
    scores[i] = dot(m, c.row(i));
  }
  const double lse_all = log_sum_exp(scores);
  const double lse_pos = log_sum_exp(scores, ex.positive);
  out.loss = lse_all - lse_pos;

  // d loss / d score_i = P(c_i|m) - P(c_i|m, positive).
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prob = std::exp(scores[i] - lse_all);
    const double pos = ex.positive[i] ? std::exp(scores[i] - lse_pos) : 0.0;
    g[i] = prob - pos;
  }

  std::vector<double> dm(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ci = c.row(i);
    for (std::size_t j = 0; j < p; ++j) dm[j] += g[i] * ci[j];
  }
  const auto add = [&](const FeatureVector &fv, double coeff,
                       std::span<const double> direction) {
    for (std::size_t k = 0; k < fv.nnz(); ++k) {
      std::vector<double> row(p);
      const double scale = coeff * fv.values[k];
      for (std::size_t j = 0; j < p; ++j) row[j] = scale * direction[j];
      out.rows.emplace_back(fv.indices[k], std::move(row));
    }
  };
  add(ex.mention, 1.0, dm);
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i] != 0.0) add(*ex.candidates[i], g[i], m);
  }
  return out;
}

// Mentions of a document grouped by sentence, in sentence order.
std::vector<std::vector<std::size_t>> mentions_by_sentence(
    const Document &doc) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    groups[doc.mentions[i].sentence.value_or(0)].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto &[sentence, mentions] : groups) out.push_back(std::move(mentions));
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (pool_size == 0 || pool_size % 2 != 0) {
    throw Error("pool size must be even");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error("learning rate must be positive");
  }
  if (group_size == 0) throw Error("group size must be positive");
}

std::vector<double> candidate_probabilities(std::span<const double> scores) {
  if (scores.empty()) throw Error("candidate pool is empty");
  const double max = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - max);
    sum += out[i];
  }
  for (double &p : out) p /= sum;
  return out;
}

std::vector<double> candidate_probabilities(const CandidatePool &pool) {
  std::vector<double> scores;
  scores.reserve(pool.candidates.size());
  for (const Candidate &c : pool.candidates) scores.push_back(c.score);
  return candidate_probabilities(scores);
}

std::optional<double> mml_loss(std::span<const double> scores,
                               std::span<const char> positive) {
  if (scores.empty()) throw Error("candidate pool is empty");
  if (positive.size() != scores.size()) {
    throw Error("one positive flag per candidate required");
  }
  if (std::none_of(positive.begin(), positive.end(),
                   [](char p) { return p != 0; })) {
    return std::nullopt;
  }
  return log_sum_exp(scores) - log_sum_exp(scores, positive);
}

std::optional<double> mml_loss(const CandidatePool &pool,
                               const std::set<EntityId> &gold) {
  std::vector<double> scores;
  std::vector<char> positive;
  for (const Candidate &c : pool.candidates) {
    scores.push_back(c.score);
    positive.push_back(gold.count(c.identifier) ? 1 : 0);
  }
  return mml_loss(scores, positive);
}

GradientResult loss_gradient(const LinearEncoder &encoder,
                             std::span<const TrainExample> batch,
                             unsigned threads) {
  std::vector<ExampleGradient> parts(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    parts[i] = example_gradient(encoder, batch[i]);
  });

  GradientResult result;
  for (const ExampleGradient &part : parts) {
    result.losses.push_back(part.loss);
    if (!part.loss) {
      ++result.skipped;
      continue;
    }
    ++result.used;
    result.loss_sum += *part.loss;
  }
  if (result.used == 0) return result;

  const double inv = 1.0 / static_cast<double>(result.used);
  const std::size_t p = encoder.projection_dim();
  for (const ExampleGradient &part : parts) {
    for (const auto &[feature, row] : part.rows) {
      auto [it, inserted] =
          result.gradient.try_emplace(feature, std::vector<double>(p, 0.0));
      for (std::size_t j = 0; j < p; ++j) it->second[j] += row[j] * inv;
    }
  }
  return result;
}

void apply_gradient(LinearEncoder &encoder, const SparseGradient &gradient,
                    double learning_rate) {
  for (const auto &[feature, row] : gradient) {
    auto w = encoder.row(feature);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= learning_rate * row[j];
  }
}

FeatureVector featurize_mention(const Featurizer &featurizer,
                                const Document &doc, const Mention &mention) {
  const MentionText mt = mention_text(doc, mention);
  const MentionContext context{mt.sentence, mt.start, mt.end};
  return featurizer.featurize(mt.surface, &context);
}

TrainResult train(LinearEncoder encoder, const std::vector<Document> &corpus,
                  const Kb &kb, const TrainConfig &config) {
  config.validate();
  std::vector<std::string> missing;
  for (const Document &doc : corpus) {
    for (const Mention &m : doc.mentions) {
      for (EntityId e : m.gold) {
        if (!kb.contains(e)) {
          missing.push_back(doc.id + " [" + std::to_string(m.start) + ", " +
                            std::to_string(m.end) + ") gold " +
                            std::to_string(e) + " not in KB");
        }
      }
    }
  }
  if (!missing.empty()) throw CorpusError(std::move(missing));

  TrainResult result{std::move(encoder), {}, 0};
  if (config.epochs == 0) return result;
  LinearEncoder &enc = result.encoder;
  const Featurizer &featurizer = enc.featurizer();

  const std::vector<FeatureVector> kb_features =
      featurize_kb(featurizer, kb, config.threads);
  std::vector<std::vector<FeatureVector>> mention_features(corpus.size());
  std::vector<std::vector<std::vector<std::size_t>>> sentence_groups(
      corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const Mention &m : corpus[d].mentions) {
      mention_features[d].push_back(featurize_mention(featurizer, corpus[d], m));
    }
    sentence_groups[d] = mentions_by_sentence(corpus[d]);
  }

  IndexSlot slot;
  const auto reencode = [&] {
    slot.publish(build_index(project(enc, kb_features, config.threads), kb,
                             ++result.generation));
  };

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.seed);

  std::size_t steps = 0;
  if (config.reencode_every_steps > 0) reencode();
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.reencode_every_steps == 0) reencode();
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }

    EpochReport report;
    report.epoch = epoch;
    double loss_sum = 0.0;
    for (std::size_t d : order) {
      const Document &doc = corpus[d];
      if (doc.mentions.empty()) continue;
      const auto index = slot.snapshot();
      const DenseMatrix mention_embeddings =
          project(enc, mention_features[d], config.threads);
      const std::vector<CandidatePool> pools =
          build_pools(*index, mention_embeddings, config.pool_size);

      std::vector<TrainExample> batch;
      std::size_t sentences_in_batch = 0;
      const auto step = [&] {
        if (batch.empty()) return;
        GradientResult g = loss_gradient(enc, batch, config.threads);
        if (!std::isfinite(g.loss_sum)) {
          throw Error("training diverged at step " + std::to_string(steps + 1) +
                      "; lower the learning rate");
        }
        loss_sum += g.loss_sum;
        report.mentions += g.used;
        report.skipped += g.skipped;
        batch.clear();
        sentences_in_batch = 0;
        if (g.empty_batch()) return;
        apply_gradient(enc, g.gradient, config.learning_rate);
        ++steps;
        if (config.reencode_every_steps > 0 &&
            steps % config.reencode_every_steps == 0) {
          reencode();
        }
      };

      for (const auto &sentence : sentence_groups[d]) {
        for (std::size_t i : sentence) {
          TrainExample ex{mention_features[d][i], {}, {}};
          for (const Candidate &c : pools[i].candidates) {
            ex.candidates.push_back(&kb_features[c.row]);
            ex.positive.push_back(doc.mentions[i].gold.count(c.identifier) ? 1
                                                                         : 0);
          }
          if (ex.candidates.empty()) {
            ++report.skipped;
            continue;
          }
          batch.push_back(std::move(ex));
        }
        if (++sentences_in_batch == config.group_size) step();
      }
      step();
    }
    report.steps = steps;
    report.mean_loss = report.mentions == 0
                           ? 0.0
                           : loss_sum / static_cast<double>(report.mentions);
    report.generation = result.generation;
    result.history.push_back(report);
  }
  return result;
}

void write_train_log(const std::vector<EpochReport> &history,
                     std::ostream &out) {
  out << "epoch\tstep\tmean_loss\tskipped\tgeneration\n";
  char loss[64];
  for (const EpochReport &r : history) {
    std::snprintf(loss, sizeof(loss), "%.17g", r.mean_loss);
    out << r.epoch << '\t' << r.steps << '\t' << loss << '\t' << r.skipped
        << '\t' << r.generation << '\n';
  }
}

}  // namespace belhd
