#include "belhd/encoder.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include "belhd/errors.h"
#include "belhd/parallel.h"
#include "belhd/text.h"

namespace belhd {
namespace {

constexpr char kMagic[8] = {'B', 'E', 'L', 'H', 'D', 'E', 'N', 'C'};
constexpr std::uint32_t kCheckpointVersion = 1;

// Adds tf counts of the padded n-grams of `word` (already lowercased
// codepoints) to `counts`, keyed by span bucket.
void count_grams(const std::u32string &word, const FeatureConfig &config,
                 std::map<std::uint32_t, double> &counts) {
  std::u32string padded;
  padded.reserve(word.size() + 2);
  padded += kWordBegin;
  padded += word;
  padded += kWordEnd;
  for (std::uint32_t n = config.min_n; n <= config.max_n; ++n) {
    if (padded.size() < n) break;
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      const std::string gram =
          text::encode(std::u32string_view(padded).substr(i, n));
      counts[static_cast<std::uint32_t>(feature_hash(gram) % config.half())] +=
          1.0;
    }
  }
}

std::vector<std::u32string> words_of(std::u32string_view cps) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t cp : cps) {
    if (text::is_alnum(cp)) {
      current += text::to_lower(cp);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

// Writes tf-idf weights of `counts`, scaled to L2 norm `target`, at
// `offset + bucket`.
void emit_block(const std::map<std::uint32_t, double> &counts,
                const std::vector<double> &idf, std::uint32_t offset,
                double target, FeatureVector &out) {
  double sq = 0.0;
  for (const auto &[bucket, tf] : counts) {
    const double w = tf * idf[bucket];
    sq += w * w;
  }
  if (sq == 0.0 || target == 0.0) return;
  const double scale = target / std::sqrt(sq);
  for (const auto &[bucket, tf] : counts) {
    out.indices.push_back(offset + bucket);
    out.values.push_back(tf * idf[bucket] * scale);
  }
}

void put_bytes(std::ostream &out, const void *data, std::size_t n) {
  out.write(static_cast<const char *>(data), static_cast<std::streamsize>(n));
}

template <typename T>
void put(std::ostream &out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint I/O assumes a little-endian host");
  put_bytes(out, &value, sizeof(T));
}

template <typename T>
T get(std::istream &in) {
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) throw Error("truncated encoder checkpoint");
  return value;
}

void put_doubles(std::ostream &out, const std::vector<double> &values) {
  put<std::uint64_t>(out, values.size());
  put_bytes(out, values.data(), values.size() * sizeof(double));
}

std::vector<double> get_doubles(std::istream &in, std::uint64_t expected) {
  const auto n = get<std::uint64_t>(in);
  if (n != expected) throw Error("encoder checkpoint has inconsistent sizes");
  std::vector<double> values(n);
  in.read(reinterpret_cast<char *>(values.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw Error("truncated encoder checkpoint");
  return values;
}

}  // namespace

double FeatureConfig::span_weight() const {
  return std::sqrt(1.0 - context_weight * context_weight);
}

void FeatureConfig::validate() const {
  if (hash_dim < 2 || hash_dim % 2 != 0) {
    throw Error("hash dimension must be even and >= 2");
  }
  if (min_n == 0 || min_n > max_n) throw Error("invalid n-gram range");
  if (!(context_weight >= 0.0 && context_weight < 1.0)) {
    throw Error("context weight must be in [0, 1)");
  }
}

double FeatureVector::norm() const {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  return std::sqrt(sq);
}

FeatureVector FeatureVector::Combine(const FeatureVector &a, double alpha,
                                     const FeatureVector &b, double beta) {
  if (a.dim != b.dim) throw DimensionError("feature dimension mismatch");
  FeatureVector out;
  out.dim = a.dim;
  std::size_t i = 0, j = 0;
  while (i < a.nnz() || j < b.nnz()) {
    if (j == b.nnz() || (i < a.nnz() && a.indices[i] < b.indices[j])) {
      out.indices.push_back(a.indices[i]);
      out.values.push_back(alpha * a.values[i++]);
    } else if (i == a.nnz() || b.indices[j] < a.indices[i]) {
      out.indices.push_back(b.indices[j]);
      out.values.push_back(beta * b.values[j++]);
    } else {
      out.indices.push_back(a.indices[i]);
      out.values.push_back(alpha * a.values[i++] + beta * b.values[j++]);
    }
  }
  return out;
}

std::uint64_t feature_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Featurizer::Featurizer(FeatureConfig config, std::vector<double> idf)
    : config_(config), idf_(std::move(idf)) {
  config_.validate();
  if (idf_.size() != config_.half()) {
    throw DimensionError("idf table size must equal hash_dim / 2");
  }
}

Featurizer Featurizer::Fit(const FeatureConfig &config,
                           std::span<const std::string> names) {
  config.validate();
  std::vector<std::uint32_t> df(config.half(), 0);
  for (const std::string &name : names) {
    std::map<std::uint32_t, double> counts;
    count_grams(text::decode(text::lowercase(name)), config, counts);
    for (const auto &[bucket, tf] : counts) ++df[bucket];
  }
  const double n = static_cast<double>(names.size());
  std::vector<double> idf(config.half());
  for (std::size_t b = 0; b < idf.size(); ++b) {
    idf[b] = std::log((1.0 + n) / (1.0 + df[b])) + 1.0;
  }
  return Featurizer(config, std::move(idf));
}

FeatureVector Featurizer::featurize(std::string_view surface,
                                    const MentionContext *context) const {
  if (text::trim(surface).empty()) {
    throw Error("cannot featurize an empty surface string");
  }
  FeatureVector out;
  out.dim = config_.hash_dim;

  std::map<std::uint32_t, double> span_counts;
  count_grams(text::decode(text::lowercase(surface)), config_, span_counts);
  emit_block(span_counts, idf_, 0, config_.span_weight(), out);

  if (context) {
    const std::u32string cps = text::decode(context->sentence);
    if (context->start > context->end || context->end > cps.size()) {
      throw Error("mention context offsets out of range");
    }
    std::vector<std::u32string> left =
        words_of(std::u32string_view(cps).substr(0, context->start));
    std::vector<std::u32string> right =
        words_of(std::u32string_view(cps).substr(context->end));
    if (config_.context_window > 0) {
      if (left.size() > config_.context_window) {
        left.erase(left.begin(), left.end() - config_.context_window);
      }
      if (right.size() > config_.context_window) {
        right.resize(config_.context_window);
      }
    }
    std::map<std::uint32_t, double> context_counts;
    for (const auto &w : left) count_grams(w, config_, context_counts);
    for (const auto &w : right) count_grams(w, config_, context_counts);
    emit_block(context_counts, idf_, config_.half(), config_.context_weight,
               out);
  }
  return out;
}

LinearEncoder::LinearEncoder(Featurizer featurizer,
                             std::uint32_t projection_dim, std::uint64_t seed)
    : featurizer_(std::move(featurizer)),
      projection_dim_(projection_dim),
      seed_(seed) {
  const std::uint32_t h = input_dim();
  if (projection_dim_ == 0 || projection_dim_ > h) {
    throw Error("projection dimension must be in [1, hash_dim]");
  }
  weights_.resize(std::size_t{h} * projection_dim_);
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  std::mt19937_64 rng(seed);
  for (double &w : weights_) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    w = (2.0 * u - 1.0) * bound;
  }
}

LinearEncoder::LinearEncoder(Featurizer featurizer,
                             std::uint32_t projection_dim, std::uint64_t seed,
                             std::vector<double> weights)
    : featurizer_(std::move(featurizer)),
      projection_dim_(projection_dim),
      seed_(seed),
      weights_(std::move(weights)) {
  if (projection_dim_ == 0 || projection_dim_ > input_dim()) {
    throw Error("projection dimension must be in [1, hash_dim]");
  }
  if (weights_.size() != std::size_t{input_dim()} * projection_dim_) {
    throw DimensionError("weight matrix must have hash_dim x projection_dim "
                         "entries");
  }
}

void LinearEncoder::encode_into(const FeatureVector &fv,
                                std::span<double> out) const {
  if (fv.dim != input_dim()) {
    throw DimensionError("feature dimension " + std::to_string(fv.dim) +
                         " does not match encoder input " +
                         std::to_string(input_dim()));
  }
  if (out.size() != projection_dim_) {
    throw DimensionError("output buffer does not match projection dimension");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < fv.nnz(); ++k) {
    const double v = fv.values[k];
    const auto w = row(fv.indices[k]);
    for (std::uint32_t j = 0; j < projection_dim_; ++j) out[j] += v * w[j];
  }
}

Embedding LinearEncoder::encode(const FeatureVector &fv) const {
  Embedding out(projection_dim_);
  encode_into(fv, out);
  return out;
}

Embedding LinearEncoder::encode_text(std::string_view surface,
                                     const MentionContext *context) const {
  return encode(featurizer_.featurize(surface, context));
}

void LinearEncoder::save(std::ostream &out) const {
  const FeatureConfig &c = featurizer_.config();
  put_bytes(out, kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, c.hash_dim);
  put<std::uint32_t>(out, projection_dim_);
  put<std::uint32_t>(out, c.min_n);
  put<std::uint32_t>(out, c.max_n);
  put<std::uint32_t>(out, c.context_window);
  put<double>(out, c.context_weight);
  put<std::uint64_t>(out, seed_);
  put_doubles(out, featurizer_.idf());
  put_doubles(out, weights_);
  if (!out) throw Error("failed writing encoder checkpoint");
}

void LinearEncoder::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  save(out);
}

LinearEncoder LinearEncoder::Load(std::istream &in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("not an encoder checkpoint");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw Error("unsupported encoder checkpoint version " +
                std::to_string(version));
  }
  FeatureConfig c;
  c.hash_dim = get<std::uint32_t>(in);
  const auto p = get<std::uint32_t>(in);
  c.min_n = get<std::uint32_t>(in);
  c.max_n = get<std::uint32_t>(in);
  c.context_window = get<std::uint32_t>(in);
  c.context_weight = get<double>(in);
  const auto seed = get<std::uint64_t>(in);
  c.validate();
  std::vector<double> idf = get_doubles(in, c.half());
  std::vector<double> weights =
      get_doubles(in, std::uint64_t{c.hash_dim} * p);
  return LinearEncoder(Featurizer(c, std::move(idf)), p, seed,
                       std::move(weights));
}

LinearEncoder LinearEncoder::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open checkpoint " + path.string());
  return Load(in);
}

std::vector<FeatureVector> featurize_kb(const Featurizer &featurizer,
                                        const Kb &kb, unsigned threads) {
  std::vector<FeatureVector> out(kb.size());
  parallel_for(kb.size(), threads, [&](std::size_t i) {
    out[i] = featurizer.featurize(kb.records()[i].name);
  });
  return out;
}

DenseMatrix project(const LinearEncoder &encoder,
                    std::span<const FeatureVector> features,
                    unsigned threads) {
  DenseMatrix out(features.size(), encoder.projection_dim());
  parallel_for(features.size(), threads, [&](std::size_t i) {
    encoder.encode_into(features[i], out.row(i));
  });
  return out;
}

DenseMatrix encode_kb(const LinearEncoder &encoder, const Kb &kb,
                      unsigned threads) {
  const auto features = featurize_kb(encoder.featurizer(), kb, threads);
  return project(encoder, features, threads);
}

}  // namespace belhd
