#include "belhd/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "belhd/text.h"
#include "json.hpp"

namespace belhd {
namespace {

using nlohmann::json;

std::string join_issues(const std::vector<std::string> &issues) {
  std::string msg = std::to_string(issues.size()) + " corpus issue(s)";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + issues[i];
  if (shown < issues.size()) msg += "\n  ...";
  return msg;
}

std::size_t read_offset(const json &value, const char *what) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw Error(std::string(what) + " must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

CorpusError::CorpusError(std::vector<std::string> issues)
    : ValidationError(join_issues(issues)), issues_(std::move(issues)) {}

Document parse_document(std::string_view json_line) {
  const json j = json::parse(json_line);
  if (!j.is_object()) throw Error("document is not a JSON object");
  Document doc;
  doc.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                  : j.at("id").dump();
  doc.text = j.at("text").get<std::string>();
  if (auto it = j.find("sentences"); it != j.end() && !it->is_null()) {
    for (const json &s : *it) {
      if (!s.is_array() || s.size() != 2) {
        throw Error("sentence offsets must be [start, end] pairs");
      }
      doc.sentences.push_back(
          {read_offset(s[0], "sentence start"), read_offset(s[1], "sentence end")});
    }
  }
  for (const json &m : j.at("mentions")) {
    Mention mention;
    mention.start = read_offset(m.at("start"), "start");
    mention.end = read_offset(m.at("end"), "end");
    for (const json &g : m.at("gold")) {
      if (!g.is_number_integer()) {
        throw Error("gold identifiers must be integers");
      }
      mention.gold.insert(g.get<EntityId>());
    }
    if (auto it = m.find("surface"); it != m.end()) {
      mention.surface = it->get<std::string>();
    }
    doc.mentions.push_back(std::move(mention));
  }
  return doc;
}

std::vector<std::string> validate_document(Document &doc) {
  std::vector<std::string> issues;
  const auto issue = [&](const std::string &msg) {
    issues.push_back(doc.id + ": " + msg);
  };
  const auto offsets = text::codepoint_offsets(doc.text);
  const std::size_t length = offsets.size() - 1;

  const bool supplied = !doc.sentences.empty() && !doc.sentences_inferred;
  if (doc.sentences.empty()) {
    doc.sentences = split_sentences(doc.text);
    doc.sentences_inferred = true;
  }
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Span &s = doc.sentences[i];
    if (s.start >= s.end || s.end > length) {
      issue("sentence " + std::to_string(i) + " [" + std::to_string(s.start) +
            ", " + std::to_string(s.end) + ") out of bounds");
    } else if (i > 0 && s.start < doc.sentences[i - 1].end) {
      issue("sentence " + std::to_string(i) + " overlaps or is out of order");
    }
  }
  if (!issues.empty()) return issues;

  for (Mention &m : doc.mentions) {
    const std::string where =
        "mention [" + std::to_string(m.start) + ", " + std::to_string(m.end) +
        ")";
    if (m.start >= m.end || m.end > length) {
      issue(where + " out of bounds (text length " + std::to_string(length) +
            ")");
      continue;
    }
    if (m.gold.empty()) {
      issue(where + " has an empty gold set");
      continue;
    }
    const std::string surface = doc.text.substr(
        offsets[m.start], offsets[m.end] - offsets[m.start]);
    if (!m.surface.empty() && m.surface != surface) {
      issue(where + " surface '" + m.surface + "' does not match text '" +
            surface + "'");
      continue;
    }
    m.surface = surface;
  }
  if (!issues.empty()) return issues;

  if (!supplied) {
    // Merge inferred sentences that would cut a mention in two.
    for (const Mention &m : doc.mentions) {
      for (std::size_t i = 0; i + 1 < doc.sentences.size();) {
        Span &s = doc.sentences[i];
        if (m.start < s.end && m.end > s.end) {
          s.end = doc.sentences[i + 1].end;
          doc.sentences.erase(doc.sentences.begin() + i + 1);
        } else {
          ++i;
        }
      }
    }
  }
  for (Mention &m : doc.mentions) {
    const Span span{m.start, m.end};
    auto it = std::find_if(doc.sentences.begin(), doc.sentences.end(),
                           [&](const Span &s) { return s.contains(span); });
    if (it == doc.sentences.end()) {
      if (supplied) {
        issue("mention [" + std::to_string(m.start) + ", " +
              std::to_string(m.end) + ") is not inside a single sentence");
        continue;
      }
      // Inferred sentences skip whitespace only; a mention outside every
      // sentence starts or ends with whitespace. Attach it to the nearest
      // preceding sentence.
      auto next = std::find_if(doc.sentences.begin(), doc.sentences.end(),
                               [&](const Span &s) { return s.start > m.start; });
      if (next == doc.sentences.begin()) {
        next->start = m.start;
        it = next;
      } else {
        it = std::prev(next);
        it->end = std::max(it->end, m.end);
      }
    }
    m.sentence = static_cast<std::size_t>(it - doc.sentences.begin());
  }
  return issues;
}

std::vector<Document> parse_corpus(std::istream &in) {
  std::vector<Document> documents;
  std::vector<std::string> issues;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    Document doc;
    try {
      doc = parse_document(line);
    } catch (const json::exception &e) {
      throw ParseError(line_no, e.what());
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    auto doc_issues = validate_document(doc);
    issues.insert(issues.end(), doc_issues.begin(), doc_issues.end());
    documents.push_back(std::move(doc));
  }
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return documents;
}

std::vector<Document> parse_corpus(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void write_corpus(const std::vector<Document> &documents, std::ostream &out) {
  for (const Document &doc : documents) {
    json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    json sentences = json::array();
    for (const Span &s : doc.sentences) sentences.push_back({s.start, s.end});
    j["sentences"] = std::move(sentences);
    json mentions = json::array();
    for (const Mention &m : doc.mentions) {
      mentions.push_back({{"start", m.start},
                          {"end", m.end},
                          {"gold", m.gold},
                          {"surface", m.surface}});
    }
    j["mentions"] = std::move(mentions);
    out << j.dump() << '\n';
  }
}

void write_corpus(const std::vector<Document> &documents,
                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_corpus(documents, out);
}

MentionText mention_text(const Document &doc, const Mention &mention) {
  MentionText out;
  out.surface = mention.surface;
  const Span sentence = mention.sentence
                            ? doc.sentences.at(*mention.sentence)
                            : Span{mention.start, mention.end};
  out.sentence = text::slice(doc.text, sentence.start, sentence.end);
  out.start = mention.start - sentence.start;
  out.end = mention.end - sentence.start;
  return out;
}

std::size_t count_mentions(const std::vector<Document> &documents) {
  std::size_t n = 0;
  for (const Document &d : documents) n += d.mentions.size();
  return n;
}

}  // namespace belhd
