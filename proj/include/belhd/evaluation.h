#ifndef BELHD_EVALUATION_H_
#define BELHD_EVALUATION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "belhd/corpus.h"
#include "belhd/encoder.h"
#include "belhd/kb.h"
#include "belhd/retrieval.h"

namespace belhd {

struct Prediction {
  std::string document;
  std::size_t start = 0;
  std::size_t end = 0;
  std::set<EntityId> gold;
  // Every entity the top-ranked name maps to.
  std::set<EntityId> entities;
  std::string top_name;
  double score = 0.0;

  friend bool operator==(const Prediction &, const Prediction &) = default;
};

// Top-1 name for the mention encoded with its sentence. Throws Error when
// the index is empty.
Prediction link(const NameIndex &index, const LinearEncoder &encoder,
                const Document &doc, const Mention &mention);

std::vector<Prediction> link_corpus(const NameIndex &index,
                                    const LinearEncoder &encoder,
                                    const std::vector<Document> &corpus,
                                    unsigned threads = 0);

struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double recall_at_1 = 0.0;
  // Filled when affected flags are supplied.
  bool has_breakdown = false;
  std::size_t affected_total = 0;
  std::size_t affected_correct = 0;
  std::size_t unaffected_total = 0;
  std::size_t unaffected_correct = 0;
};

// A prediction is correct iff it has exactly one entity and that entity is
// in the gold set. Throws Error on misaligned input or no mentions.
bool is_correct(const std::set<EntityId> &predicted,
                const std::set<EntityId> &gold);

EvalReport recall_at_1(std::span<const std::set<EntityId>> predicted,
                       std::span<const std::set<EntityId>> gold,
                       std::span<const char> affected = {});
EvalReport recall_at_1(std::span<const Prediction> predictions,
                       std::span<const char> affected = {});

// Rows: document, start, end, gold, predicted, top_name, score.
void write_predictions(std::span<const Prediction> predictions,
                       std::ostream &out);
std::vector<Prediction> read_predictions(std::istream &in);
std::vector<Prediction> read_predictions(const std::filesystem::path &path);

void write_eval_kv(const EvalReport &report, std::ostream &out);
void write_eval_tsv(const EvalReport &report, std::ostream &out);

}  // namespace belhd

#endif  // BELHD_EVALUATION_H_
