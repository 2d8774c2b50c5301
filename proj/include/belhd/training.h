#ifndef BELHD_TRAINING_H_
#define BELHD_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "belhd/corpus.h"
#include "belhd/encoder.h"
#include "belhd/kb.h"
#include "belhd/retrieval.h"

namespace belhd {

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t pool_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  // 0 re-encodes the KB at the start of every epoch; N > 0 re-encodes once
  // before training and then every N optimizer steps.
  std::size_t reencode_every_steps = 0;
  // Sentences (with mentions) accumulated per optimizer step.
  std::size_t group_size = 8;
  unsigned threads = 0;

  void validate() const;
};

// Softmax over inner-product scores, max-shifted. Throws Error when empty.
std::vector<double> candidate_probabilities(std::span<const double> scores);
std::vector<double> candidate_probabilities(const CandidatePool &pool);

// -log of the probability mass on positive candidates; nullopt when the pool
// has no positive (the mention is skipped).
std::optional<double> mml_loss(std::span<const double> scores,
                               std::span<const char> positive);
// Positives are candidates whose identifier is in `gold`; scores are the
// pool's candidate scores.
std::optional<double> mml_loss(const CandidatePool &pool,
                               const std::set<EntityId> &gold);

// One mention with its pool, as features. Candidate features are borrowed.
struct TrainExample {
  FeatureVector mention;
  std::vector<const FeatureVector *> candidates;
  std::vector<char> positive;
};

// Gradient rows keyed by feature index; each row has projection_dim entries.
using SparseGradient = std::map<std::uint32_t, std::vector<double>>;

struct GradientResult {
  SparseGradient gradient;  // of the mean loss over non-skipped mentions
  std::vector<std::optional<double>> losses;  // per example
  double loss_sum = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;

  // True when every example was skipped; the gradient is then empty.
  bool empty_batch() const { return used == 0; }
  double mean_loss() const {
    return used == 0 ? 0.0 : loss_sum / static_cast<double>(used);
  }
};

// Exact gradient of the mean MML loss w.r.t. W, through both mention and
// candidate embeddings.
GradientResult loss_gradient(const LinearEncoder &encoder,
                             std::span<const TrainExample> batch,
                             unsigned threads = 1);

// W -= learning_rate * gradient.
void apply_gradient(LinearEncoder &encoder, const SparseGradient &gradient,
                    double learning_rate);

struct EpochReport {
  std::size_t epoch = 0;  // 1-based
  std::size_t steps = 0;  // cumulative optimizer steps
  double mean_loss = 0.0;
  std::size_t mentions = 0;  // contributing to the loss
  std::size_t skipped = 0;
  std::uint64_t generation = 0;  // index generation at epoch end
};

struct TrainResult {
  LinearEncoder encoder;
  std::vector<EpochReport> history;
  std::uint64_t generation = 0;
};

// Featurizes a mention with its sentence as context.
FeatureVector featurize_mention(const Featurizer &featurizer,
                                const Document &doc, const Mention &mention);

// Trains with candidate-sharing pools and SGD. Throws CorpusError when a
// gold entity is missing from the KB.
TrainResult train(LinearEncoder encoder, const std::vector<Document> &corpus,
                  const Kb &kb, const TrainConfig &config);

// Rows: epoch, step, mean_loss, skipped, generation.
void write_train_log(const std::vector<EpochReport> &history,
                     std::ostream &out);

}  // namespace belhd

#endif  // BELHD_TRAINING_H_
