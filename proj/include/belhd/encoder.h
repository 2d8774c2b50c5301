#ifndef BELHD_ENCODER_H_
#define BELHD_ENCODER_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "belhd/kb.h"
#include "belhd/matrix.h"

namespace belhd {

struct FeatureConfig {
  // Feature dimension h. The lower half holds span n-grams, the upper half
  // context n-grams.
  std::uint32_t hash_dim = 1u << 18;
  std::uint32_t min_n = 2;
  std::uint32_t max_n = 3;
  // L2 norm of the context block. The span block has norm
  // sqrt(1 - context_weight^2) whether or not a context is present.
  double context_weight = 0.6;
  // Context words kept on each side of the mention; 0 keeps the sentence.
  std::uint32_t context_window = 0;

  std::uint32_t half() const { return hash_dim / 2; }
  double span_weight() const;
  void validate() const;

  friend bool operator==(const FeatureConfig &,
                         const FeatureConfig &) = default;
};

// Sparse vector with sorted, unique indices.
struct FeatureVector {
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  double norm() const;

  // alpha * a + beta * b.
  static FeatureVector Combine(const FeatureVector &a, double alpha,
                               const FeatureVector &b, double beta);

  friend bool operator==(const FeatureVector &,
                         const FeatureVector &) = default;
};

// Sentence containing the mention, with the mention's codepoint range.
struct MentionContext {
  std::string_view sentence;
  std::size_t start = 0;
  std::size_t end = 0;
};

// 64-bit FNV-1a; n-grams are bucketed by feature_hash(gram) % (h / 2).
std::uint64_t feature_hash(std::string_view bytes);

// Boundary markers padding every word before n-gram extraction.
inline constexpr char32_t kWordBegin = U'\u0002';
inline constexpr char32_t kWordEnd = U'\u0003';

// Hashed character n-gram TF-IDF featurizer. IDF is fitted once on KB names
// and frozen.
class Featurizer {
 public:
  Featurizer() = default;
  Featurizer(FeatureConfig config, std::vector<double> idf);

  static Featurizer Fit(const FeatureConfig &config,
                        std::span<const std::string> names);

  // Throws Error for empty text.
  FeatureVector featurize(std::string_view text,
                          const MentionContext *context = nullptr) const;

  const FeatureConfig &config() const { return config_; }
  const std::vector<double> &idf() const { return idf_; }

  friend bool operator==(const Featurizer &, const Featurizer &) = default;

 private:
  FeatureConfig config_;
  std::vector<double> idf_;  // one entry per span bucket
};

// Featurizer followed by the projection head W (h x p, row-major).
class LinearEncoder {
 public:
  LinearEncoder() = default;
  // Weights drawn uniformly from [-1/sqrt(h), 1/sqrt(h)] with `seed`.
  LinearEncoder(Featurizer featurizer, std::uint32_t projection_dim,
                std::uint64_t seed);
  LinearEncoder(Featurizer featurizer, std::uint32_t projection_dim,
                std::uint64_t seed, std::vector<double> weights);

  std::uint32_t input_dim() const { return featurizer_.config().hash_dim; }
  std::uint32_t projection_dim() const { return projection_dim_; }
  std::uint64_t seed() const { return seed_; }
  const Featurizer &featurizer() const { return featurizer_; }

  // W^T fv. Throws DimensionError when fv.dim != h.
  Embedding encode(const FeatureVector &fv) const;
  void encode_into(const FeatureVector &fv, std::span<double> out) const;
  Embedding encode_text(std::string_view text,
                        const MentionContext *context = nullptr) const;

  std::span<const double> row(std::uint32_t feature) const {
    return {weights_.data() + std::size_t{feature} * projection_dim_,
            projection_dim_};
  }
  std::span<double> row(std::uint32_t feature) {
    return {weights_.data() + std::size_t{feature} * projection_dim_,
            projection_dim_};
  }
  std::vector<double> &weights() { return weights_; }
  const std::vector<double> &weights() const { return weights_; }

  // Versioned little-endian binary checkpoint.
  void save(std::ostream &out) const;
  void save(const std::filesystem::path &path) const;
  static LinearEncoder Load(std::istream &in);
  static LinearEncoder Load(const std::filesystem::path &path);

  friend bool operator==(const LinearEncoder &,
                         const LinearEncoder &) = default;

 private:
  Featurizer featurizer_;
  std::uint32_t projection_dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> weights_;
};

// Feature vectors of every KB name, row-aligned with kb.records().
std::vector<FeatureVector> featurize_kb(const Featurizer &featurizer,
                                        const Kb &kb, unsigned threads = 0);

// One embedding per feature vector.
DenseMatrix project(const LinearEncoder &encoder,
                    std::span<const FeatureVector> features,
                    unsigned threads = 0);

// One embedding per KB record, row-aligned with kb.records().
DenseMatrix encode_kb(const LinearEncoder &encoder, const Kb &kb,
                      unsigned threads = 0);

}  // namespace belhd

#endif  // BELHD_ENCODER_H_
