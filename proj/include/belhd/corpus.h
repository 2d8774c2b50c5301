#ifndef BELHD_CORPUS_H_
#define BELHD_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "belhd/errors.h"
#include "belhd/kb.h"

namespace belhd {

// Half-open codepoint range [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(const Span &other) const {
    return start <= other.start && other.end <= end;
  }
  friend bool operator==(const Span &, const Span &) = default;
};

// Gold-annotated mention. Offsets are codepoints into Document::text.
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::set<EntityId> gold;
  std::optional<std::size_t> sentence;

  friend bool operator==(const Mention &, const Mention &) = default;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Span> sentences;
  std::vector<Mention> mentions;
  // Sentences were produced by split_sentences rather than read from input.
  bool sentences_inferred = false;

  friend bool operator==(const Document &a, const Document &b) {
    return a.id == b.id && a.text == b.text && a.sentences == b.sentences &&
           a.mentions == b.mentions;
  }
};

// Validation failures of a corpus, one message per offending document or
// mention, prefixed with the document id.
class CorpusError : public ValidationError {
 public:
  explicit CorpusError(std::vector<std::string> issues);
  const std::vector<std::string> &issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// One JSON object per line:
//   {"id": "...", "text": "...", "sentences": [[s, e], ...],
//    "mentions": [{"start": s, "end": e, "gold": [id, ...]}, ...]}
// "sentences" is optional; when absent, split_sentences supplies them.
// Mentions may carry a "surface" string, which must match the text slice.
std::vector<Document> parse_corpus(std::istream &in);
std::vector<Document> parse_corpus(const std::filesystem::path &path);

Document parse_document(std::string_view json_line);

void write_corpus(const std::vector<Document> &documents, std::ostream &out);
void write_corpus(const std::vector<Document> &documents,
                  const std::filesystem::path &path);

// Validates offsets, materializes surfaces and assigns every mention to the
// sentence containing it. Inferred sentences are merged where they would cut
// a mention; supplied sentences crossed by a mention are rejected. Returns
// the list of issues (empty when valid).
std::vector<std::string> validate_document(Document &doc);

// Rule-based splitter: '.', '!' or '?' (plus closing quotes/brackets)
// followed by whitespace ends a sentence unless the next word starts
// lowercase or the token before '.' is an abbreviation or an initial. Blank
// lines always separate sentences. Spans exclude surrounding whitespace.
std::vector<Span> split_sentences(std::string_view text);

// Owning view of a mention inside its sentence.
struct MentionText {
  std::string surface;
  std::string sentence;
  std::size_t start = 0;  // codepoints, relative to sentence
  std::size_t end = 0;
};

// Requires a validated document.
MentionText mention_text(const Document &doc, const Mention &mention);

std::size_t count_mentions(const std::vector<Document> &documents);

}  // namespace belhd

#endif  // BELHD_CORPUS_H_
