#ifndef BELHD_STRING_MATCH_H_
#define BELHD_STRING_MATCH_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "belhd/corpus.h"
#include "belhd/homonyms.h"
#include "belhd/kb.h"

namespace belhd {

// Lowercases and drops every codepoint that is not a Unicode letter or digit.
std::string normalize(std::string_view s);

// Levenshtein distance with insertion = deletion = 1 and substitution = 2,
// over codepoints.
std::size_t weighted_levenshtein(std::u32string_view a, std::u32string_view b);

// Similarity in [0, 1]: 1 - D / (|a| + |b|) on normalized strings, 1 when
// both normalize to the empty string.
double similarity(std::string_view a, std::string_view b);

struct AffectedMention {
  std::string document;
  std::size_t start = 0;
  std::size_t end = 0;
  std::set<EntityId> gold;
  std::string matched_homonym;  // empty when not affected
  bool affected = false;
};

struct AffectedReport {
  std::size_t affected = 0;
  std::size_t total = 0;
  std::vector<AffectedMention> mentions;

  double fraction() const {
    return total == 0 ? 0.0
                      : static_cast<double>(affected) /
                            static_cast<double>(total);
  }
};

// A mention is affected when one of its gold entities has a name in
// `homonyms` with similarity 1 to the mention surface. Throws
// ValidationError listing mentions whose gold entity is missing from `kb`.
AffectedReport estimate_affected(const std::vector<Document> &corpus,
                                 const Kb &kb, const HomonymMap &homonyms);

// Rows: document, start, end, gold, matched_homonym, affected.
void write_affected(const AffectedReport &report, std::ostream &out);

}  // namespace belhd

#endif  // BELHD_STRING_MATCH_H_
