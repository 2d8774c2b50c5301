#ifndef BELHD_RETRIEVAL_H_
#define BELHD_RETRIEVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "belhd/kb.h"
#include "belhd/matrix.h"

namespace belhd {

enum class Provenance { kKb, kShared };

std::string_view provenance_name(Provenance p);

struct RecordMeta {
  Uid uid = 0;
  EntityId identifier = 0;
  std::string name;

  friend bool operator==(const RecordMeta &, const RecordMeta &) = default;
};

struct Candidate {
  std::size_t row = 0;  // index row
  Uid uid = 0;
  EntityId identifier = 0;
  std::string name;
  double score = 0.0;
  Provenance provenance = Provenance::kKb;

  friend bool operator==(const Candidate &, const Candidate &) = default;
};

struct CandidatePool {
  std::size_t mention = 0;
  std::vector<Candidate> candidates;  // kb entries first, then shared
  std::size_t kb_count = 0;
  std::size_t shared_count = 0;
};

// Exact inner-product index over KB name embeddings.
class NameIndex {
 public:
  NameIndex() = default;
  NameIndex(DenseMatrix embeddings, std::vector<RecordMeta> meta,
            std::uint64_t generation);

  std::size_t size() const { return meta_.size(); }
  std::size_t dim() const { return embeddings_.cols(); }
  std::uint64_t generation() const { return generation_; }

  const RecordMeta &meta(std::size_t row) const { return meta_[row]; }
  std::span<const double> embedding(std::size_t row) const {
    return embeddings_.row(row);
  }
  const DenseMatrix &embeddings() const { return embeddings_; }

  // The min(k, size()) rows with the largest <q, row>, descending, ties by
  // lower uid. Throws DimensionError when q.size() != dim() on a non-empty
  // index and Error when k == 0.
  std::vector<Candidate> query_topk(std::span<const double> q,
                                    std::size_t k) const;

  std::set<EntityId> entities_of(std::string_view name) const;

  void save(std::ostream &out) const;
  void save(const std::filesystem::path &path) const;
  static NameIndex Load(std::istream &in);
  static NameIndex Load(const std::filesystem::path &path);

  friend bool operator==(const NameIndex &a, const NameIndex &b) {
    return a.embeddings_ == b.embeddings_ && a.meta_ == b.meta_ &&
           a.generation_ == b.generation_;
  }

 private:
  DenseMatrix embeddings_;
  std::vector<RecordMeta> meta_;
  std::uint64_t generation_ = 0;
  std::map<std::string, std::set<EntityId>, std::less<>> by_name_;
};

// Throws DimensionError when embeddings.rows() != kb.size().
NameIndex build_index(DenseMatrix embeddings, const Kb &kb,
                      std::uint64_t generation = 0);

// Holder for the current index generation. Readers take a snapshot; a
// re-encode publishes a new index that later snapshots observe.
class IndexSlot {
 public:
  std::shared_ptr<const NameIndex> snapshot() const;
  void publish(NameIndex index);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const NameIndex> current_ = std::make_shared<NameIndex>();
};

// Candidates for mention i taken from the kb halves of the other mentions of
// the document, excluding uids already in kb_halves[i], ranked by <m_i, c>
// (ties by uid). Returns at most k_half entries with provenance kShared.
std::vector<Candidate> shared_candidates(
    const NameIndex &index, std::span<const std::vector<Candidate>> kb_halves,
    std::size_t i, std::span<const double> m_i, std::size_t k_half);

// Pools of size k for every mention of one document: k/2 kb candidates plus
// k/2 shared candidates, with kb backfill when sharing falls short. Throws
// Error for odd or zero k.
std::vector<CandidatePool> build_pools(const NameIndex &index,
                                       const DenseMatrix &mention_embeddings,
                                       std::size_t k);

// Rows: mention, rank, uid, name, score, provenance.
void write_candidates(const std::vector<CandidatePool> &pools,
                      std::ostream &out);

}  // namespace belhd

#endif  // BELHD_RETRIEVAL_H_
