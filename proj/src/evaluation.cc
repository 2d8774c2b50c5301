#include "belhd/evaluation.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "belhd/errors.h"
#include "belhd/parallel.h"
#include "belhd/text.h"
#include "belhd/training.h"

namespace belhd {
namespace {

std::string join(const std::set<EntityId> &ids) {
  std::string out;
  for (EntityId e : ids) {
    if (!out.empty()) out += ';';
    out += std::to_string(e);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char *what) {
  T value{};
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line_no, std::string(what) + " is not a number: '" +
                                  std::string(field) + "'");
  }
  return value;
}

constexpr std::string_view kPredictionHeader =
    "document\tstart\tend\tgold\tpredicted\ttop_name\tscore";

std::set<EntityId> parse_ids(std::string_view field, std::size_t line_no) {
  std::set<EntityId> out;
  if (field.empty()) return out;
  for (std::string_view part : text::split(field, ';')) {
    out.insert(parse_number<EntityId>(part, line_no, "entity"));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Prediction link(const NameIndex &index, const LinearEncoder &encoder,
                const Document &doc, const Mention &mention) {
  if (index.size() == 0) throw Error("cannot link against an empty index");
  const Embedding m =
      encoder.encode(featurize_mention(encoder.featurizer(), doc, mention));
  const std::vector<Candidate> top = index.query_topk(m, 1);
  Prediction p;
  p.document = doc.id;
  p.start = mention.start;
  p.end = mention.end;
  p.gold = mention.gold;
  p.top_name = top.front().name;
  p.score = top.front().score;
  p.entities = index.entities_of(p.top_name);
  return p;
}

std::vector<Prediction> link_corpus(const NameIndex &index,
                                    const LinearEncoder &encoder,
                                    const std::vector<Document> &corpus,
                                    unsigned threads) {
  std::vector<std::pair<const Document *, const Mention *>> mentions;
  for (const Document &doc : corpus) {
    for (const Mention &m : doc.mentions) mentions.emplace_back(&doc, &m);
  }
  std::vector<Prediction> out(mentions.size());
  parallel_for(mentions.size(), threads, [&](std::size_t i) {
    out[i] = link(index, encoder, *mentions[i].first, *mentions[i].second);
  });
  return out;
}

bool is_correct(const std::set<EntityId> &predicted,
                const std::set<EntityId> &gold) {
  return predicted.size() == 1 && gold.count(*predicted.begin()) != 0;
}

EvalReport recall_at_1(std::span<const std::set<EntityId>> predicted,
                       std::span<const std::set<EntityId>> gold,
                       std::span<const char> affected) {
  if (predicted.size() != gold.size()) {
    throw Error("predictions (" + std::to_string(predicted.size()) +
                ") and gold (" + std::to_string(gold.size()) +
                ") are not aligned");
  }
  if (!affected.empty() && affected.size() != gold.size()) {
    throw Error("affected flags are not aligned with gold");
  }
  if (predicted.empty()) throw Error("no mentions to evaluate");
  EvalReport r;
  r.total = predicted.size();
  r.has_breakdown = !affected.empty();
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool ok = is_correct(predicted[i], gold[i]);
    r.correct += ok;
    if (r.has_breakdown) {
      if (affected[i]) {
        ++r.affected_total;
        r.affected_correct += ok;
      } else {
        ++r.unaffected_total;
        r.unaffected_correct += ok;
      }
    }
  }
  r.recall_at_1 = static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

EvalReport recall_at_1(std::span<const Prediction> predictions,
                       std::span<const char> affected) {
  std::vector<std::set<EntityId>> predicted, gold;
  predicted.reserve(predictions.size());
  gold.reserve(predictions.size());
  for (const Prediction &p : predictions) {
    predicted.push_back(p.entities);
    gold.push_back(p.gold);
  }
  return recall_at_1(predicted, gold, affected);
}

void write_predictions(std::span<const Prediction> predictions,
                       std::ostream &out) {
  out << kPredictionHeader << '\n';
  for (const Prediction &p : predictions) {
    out << p.document << '\t' << p.start << '\t' << p.end << '\t'
        << join(p.gold) << '\t' << join(p.entities) << '\t' << p.top_name
        << '\t' << format_double(p.score) << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream &in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kPredictionHeader) {
        throw ParseError(line_no, "expected the prediction table header");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 7) {
      throw ParseError(line_no, "expected 7 tab-separated columns");
    }
    Prediction p;
    p.document = std::string(f[0]);
    p.start = parse_number<std::size_t>(f[1], line_no, "start");
    p.end = parse_number<std::size_t>(f[2], line_no, "end");
    p.gold = parse_ids(f[3], line_no);
    p.entities = parse_ids(f[4], line_no);
    p.top_name = std::string(f[5]);
    p.score = parse_number<double>(f[6], line_no, "score");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open predictions " + path.string());
  return read_predictions(in);
}

void write_eval_kv(const EvalReport &r, std::ostream &out) {
  out << "mentions=" << r.total << '\n'
      << "correct=" << r.correct << '\n'
      << "recall_at_1=" << format_double(r.recall_at_1) << '\n';
  if (r.has_breakdown) {
    out << "affected_mentions=" << r.affected_total << '\n'
        << "affected_correct=" << r.affected_correct << '\n'
        << "unaffected_mentions=" << r.unaffected_total << '\n'
        << "unaffected_correct=" << r.unaffected_correct << '\n';
  }
}

void write_eval_tsv(const EvalReport &r, std::ostream &out) {
  out << "subset\tmentions\tcorrect\trecall_at_1\n";
  const auto row = [&](const char *name, std::size_t total,
                       std::size_t correct) {
    const double recall =
        total == 0 ? 0.0
                   : static_cast<double>(correct) / static_cast<double>(total);
    out << name << '\t' << total << '\t' << correct << '\t'
        << format_double(recall) << '\n';
  };
  row("all", r.total, r.correct);
  if (r.has_breakdown) {
    row("affected", r.affected_total, r.affected_correct);
    row("unaffected", r.unaffected_total, r.unaffected_correct);
  }
}

}  // namespace belhd
