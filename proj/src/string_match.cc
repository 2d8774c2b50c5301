#include "belhd/string_match.h"

#include <algorithm>
#include <map>
#include <ostream>

#include "belhd/errors.h"
#include "belhd/text.h"

namespace belhd {

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : text::decode(s)) {
    if (text::is_alnum(cp)) text::append(out, text::to_lower(cp));
  }
  return out;
}

std::size_t weighted_levenshtein(std::u32string_view a,
                                 std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitution =
          prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitution});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double similarity(std::string_view a, std::string_view b) {
  const std::u32string na = text::decode(normalize(a));
  const std::u32string nb = text::decode(normalize(b));
  const std::size_t total = na.size() + nb.size();
  if (total == 0) return 1.0;
  const std::size_t distance = weighted_levenshtein(na, nb);
  return 1.0 - static_cast<double>(distance) / static_cast<double>(total);
}

AffectedReport estimate_affected(const std::vector<Document> &corpus,
                                 const Kb &kb, const HomonymMap &homonyms) {
  std::vector<std::string> missing;
  for (const Document &doc : corpus) {
    for (const Mention &m : doc.mentions) {
      for (EntityId e : m.gold) {
        if (!kb.contains(e)) {
          missing.push_back(doc.id + " [" + std::to_string(m.start) + ", " +
                            std::to_string(m.end) + ") gold " +
                            std::to_string(e) + " not in KB");
        }
      }
    }
  }
  if (!missing.empty()) throw CorpusError(std::move(missing));

  // Normalized homonymous names per entity.
  std::map<EntityId, std::vector<std::pair<std::string, std::string>>>
      homonym_names;
  for (const auto &[name, entities] : homonyms) {
    const std::string normalized = normalize(name);
    for (EntityId e : entities) homonym_names[e].emplace_back(name, normalized);
  }

  AffectedReport report;
  for (const Document &doc : corpus) {
    for (const Mention &m : doc.mentions) {
      AffectedMention row{doc.id, m.start, m.end, m.gold, {}, false};
      const std::string surface = normalize(m.surface);
      for (EntityId e : m.gold) {
        auto it = homonym_names.find(e);
        if (it == homonym_names.end()) continue;
        for (const auto &[name, normalized] : it->second) {
          if (similarity(surface, normalized) == 1.0) {
            row.matched_homonym = name;
            row.affected = true;
            break;
          }
        }
        if (row.affected) break;
      }
      report.affected += row.affected;
      ++report.total;
      report.mentions.push_back(std::move(row));
    }
  }
  return report;
}

void write_affected(const AffectedReport &report, std::ostream &out) {
  out << "document\tstart\tend\tgold\tmatched_homonym\taffected\n";
  for (const AffectedMention &m : report.mentions) {
    out << m.document << '\t' << m.start << '\t' << m.end << '\t';
    bool first = true;
    for (EntityId e : m.gold) {
      out << (first ? "" : ";") << e;
      first = false;
    }
    out << '\t' << m.matched_homonym << '\t' << (m.affected ? 1 : 0) << '\n';
  }
}

}  // namespace belhd
