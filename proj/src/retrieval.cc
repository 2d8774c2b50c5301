#include "belhd/retrieval.h"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "belhd/errors.h"

namespace belhd {
namespace {

constexpr char kMagic[8] = {'B', 'E', 'L', 'H', 'D', 'I', 'D', 'X'};
constexpr std::uint32_t kIndexVersion = 1;

template <typename T>
void put(std::ostream &out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "index I/O assumes a little-endian host");
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) throw Error("truncated index file");
  return value;
}

// Ranking order: higher score first, then lower uid.
struct Ranked {
  double score;
  Uid uid;
  std::size_t row;
};

bool ranks_before(const Ranked &a, const Ranked &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.uid < b.uid;
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  return p == Provenance::kKb ? "kb" : "shared";
}

NameIndex::NameIndex(DenseMatrix embeddings, std::vector<RecordMeta> meta,
                     std::uint64_t generation)
    : embeddings_(std::move(embeddings)),
      meta_(std::move(meta)),
      generation_(generation) {
  if (embeddings_.rows() != meta_.size()) {
    throw DimensionError("index has " + std::to_string(embeddings_.rows()) +
                         " embeddings for " + std::to_string(meta_.size()) +
                         " records");
  }
  for (const RecordMeta &m : meta_) by_name_[m.name].insert(m.identifier);
}

std::vector<Candidate> NameIndex::query_topk(std::span<const double> q,
                                             std::size_t k) const {
  if (k == 0) throw Error("k must be at least 1");
  if (meta_.empty()) return {};
  if (q.size() != dim()) {
    throw DimensionError("query dimension " + std::to_string(q.size()) +
                         " does not match index dimension " +
                         std::to_string(dim()));
  }
  std::vector<Ranked> ranked(meta_.size());
  for (std::size_t row = 0; row < meta_.size(); ++row) {
    ranked[row] = {dot(q, embeddings_.row(row)), meta_[row].uid, row};
  }
  k = std::min(k, ranked.size());
  if (k < ranked.size()) {
    std::nth_element(ranked.begin(), ranked.begin() + k, ranked.end(),
                     ranks_before);
    ranked.resize(k);
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);

  std::vector<Candidate> out;
  out.reserve(k);
  for (const Ranked &r : ranked) {
    const RecordMeta &m = meta_[r.row];
    out.push_back({r.row, m.uid, m.identifier, m.name, r.score,
                   Provenance::kKb});
  }
  return out;
}

std::set<EntityId> NameIndex::entities_of(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? std::set<EntityId>{} : it->second;
}

void NameIndex::save(std::ostream &out) const {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kIndexVersion);
  put<std::uint64_t>(out, generation_);
  put<std::uint64_t>(out, meta_.size());
  put<std::uint64_t>(out, dim());
  for (const RecordMeta &m : meta_) {
    put<std::int64_t>(out, m.uid);
    put<std::int64_t>(out, m.identifier);
    put<std::uint64_t>(out, m.name.size());
    out.write(m.name.data(), static_cast<std::streamsize>(m.name.size()));
  }
  const auto &data = embeddings_.data();
  out.write(reinterpret_cast<const char *>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw Error("failed writing index");
}

void NameIndex::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  save(out);
}

NameIndex NameIndex::Load(std::istream &in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("not an index file");
  }
  if (get<std::uint32_t>(in) != kIndexVersion) {
    throw Error("unsupported index version");
  }
  const auto generation = get<std::uint64_t>(in);
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  std::vector<RecordMeta> meta(rows);
  for (RecordMeta &m : meta) {
    m.uid = get<std::int64_t>(in);
    m.identifier = get<std::int64_t>(in);
    m.name.resize(get<std::uint64_t>(in));
    in.read(m.name.data(), static_cast<std::streamsize>(m.name.size()));
  }
  DenseMatrix embeddings(rows, cols);
  in.read(reinterpret_cast<char *>(embeddings.data().data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw Error("truncated index file");
  return NameIndex(std::move(embeddings), std::move(meta), generation);
}

NameIndex NameIndex::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open index " + path.string());
  return Load(in);
}

NameIndex build_index(DenseMatrix embeddings, const Kb &kb,
                      std::uint64_t generation) {
  if (embeddings.rows() != kb.size()) {
    throw DimensionError("embedding rows (" +
                         std::to_string(embeddings.rows()) +
                         ") do not match KB records (" +
                         std::to_string(kb.size()) + ")");
  }
  std::vector<RecordMeta> meta;
  meta.reserve(kb.size());
  for (const KbRecord &r : kb.records()) {
    meta.push_back({r.uid, r.identifier, r.name});
  }
  return NameIndex(std::move(embeddings), std::move(meta), generation);
}

std::shared_ptr<const NameIndex> IndexSlot::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return current_;
}

void IndexSlot::publish(NameIndex index) {
  auto next = std::make_shared<const NameIndex>(std::move(index));
  std::lock_guard<std::mutex> lock(mu_);
  current_ = std::move(next);
}

std::vector<Candidate> shared_candidates(
    const NameIndex &index, std::span<const std::vector<Candidate>> kb_halves,
    std::size_t i, std::span<const double> m_i, std::size_t k_half) {
  std::set<Uid> excluded;
  for (const Candidate &c : kb_halves[i]) excluded.insert(c.uid);

  std::vector<Ranked> ranked;
  for (std::size_t j = 0; j < kb_halves.size(); ++j) {
    if (j == i) continue;
    for (const Candidate &c : kb_halves[j]) {
      if (!excluded.insert(c.uid).second) continue;
      ranked.push_back({dot(m_i, index.embedding(c.row)), c.uid, c.row});
    }
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  if (ranked.size() > k_half) ranked.resize(k_half);

  std::vector<Candidate> out;
  out.reserve(ranked.size());
  for (const Ranked &r : ranked) {
    const RecordMeta &m = index.meta(r.row);
    out.push_back({r.row, m.uid, m.identifier, m.name, r.score,
                   Provenance::kShared});
  }
  return out;
}

std::vector<CandidatePool> build_pools(const NameIndex &index,
                                       const DenseMatrix &mention_embeddings,
                                       std::size_t k) {
  if (k == 0 || k % 2 != 0) throw Error("pool size must be even");
  const std::size_t half = k / 2;
  const std::size_t n = mention_embeddings.rows();

  // Top-k per mention: ranks 1..k/2 form the kb half, the rest is backfill.
  std::vector<std::vector<Candidate>> ranked(n);
  std::vector<std::vector<Candidate>> kb_halves(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (index.size() == 0) break;
    ranked[i] = index.query_topk(mention_embeddings.row(i), k);
    kb_halves[i].assign(
        ranked[i].begin(),
        ranked[i].begin() + static_cast<std::ptrdiff_t>(
                                std::min(half, ranked[i].size())));
  }

  std::vector<CandidatePool> pools(n);
  for (std::size_t i = 0; i < n; ++i) {
    CandidatePool &pool = pools[i];
    pool.mention = i;
    std::vector<Candidate> shared =
        shared_candidates(index, kb_halves, i, mention_embeddings.row(i), half);
    std::set<Uid> used;
    for (const Candidate &c : shared) used.insert(c.uid);

    for (const Candidate &c : kb_halves[i]) {
      pool.candidates.push_back(c);
      used.insert(c.uid);
    }
    // Backfill with further kb ranks so the pool keeps size k.
    const std::size_t wanted_kb = k - shared.size();
    for (std::size_t r = kb_halves[i].size();
         r < ranked[i].size() && pool.candidates.size() < wanted_kb; ++r) {
      if (used.insert(ranked[i][r].uid).second) {
        pool.candidates.push_back(ranked[i][r]);
      }
    }
    pool.kb_count = pool.candidates.size();
    pool.shared_count = shared.size();
    for (Candidate &c : shared) pool.candidates.push_back(std::move(c));
  }
  return pools;
}

void write_candidates(const std::vector<CandidatePool> &pools,
                      std::ostream &out) {
  out << "mention\trank\tuid\tname\tscore\tprovenance\n";
  char score[64];
  for (const CandidatePool &pool : pools) {
    for (std::size_t r = 0; r < pool.candidates.size(); ++r) {
      const Candidate &c = pool.candidates[r];
      std::snprintf(score, sizeof(score), "%.17g", c.score);
      out << pool.mention << '\t' << r + 1 << '\t' << c.uid << '\t' << c.name
          << '\t' << score << '\t' << provenance_name(c.provenance) << '\n';
    }
  }
}

}  // namespace belhd
