#ifndef BELHD_HOMONYMS_H_
#define BELHD_HOMONYMS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

#include "belhd/kb.h"

namespace belhd {

// Homonymous name -> entities it labels.
using HomonymMap = std::map<std::string, std::set<EntityId>>;

// Intra-species homonyms: names with more than one identifier inside a
// (name, species) group. Records without species form their own group, so a
// species-free KB is grouped by name alone.
HomonymMap find_homonyms(const Kb &kb);

// Names labeling more than one entity across at least two species. Throws
// UnsupportedError unless every record carries a species.
HomonymMap find_cross_species_homonyms(const Kb &kb);

// Names with |V_KB(s)| > 1, regardless of species.
HomonymMap find_ambiguous_names(const Kb &kb);

struct HomonymReport {
  std::size_t total_names = 0;  // KB records
  std::size_t distinct_names = 0;
  std::size_t homonyms = 0;  // intra-species or cross-species homonym names
  std::size_t preferred_homonyms = 0;  // preferred name of at least one entity
  std::size_t other_homonyms = 0;
  std::size_t cross_species_homonyms = 0;
  bool cross_species_checked = false;
  HomonymMap intra;
  HomonymMap cross_species;

  double fraction(std::size_t count) const {
    return total_names == 0 ? 0.0
                            : static_cast<double>(count) /
                                  static_cast<double>(total_names);
  }
};

// Counts homonyms and splits them into preferred-name, other and
// cross-species categories. A name may be both intra- and cross-species.
HomonymReport homonym_report(const Kb &kb);

// key=value summary.
void write_report_kv(const HomonymReport &report, std::ostream &out);
// Summary as "metric<TAB>count<TAB>fraction" rows.
void write_report_tsv(const HomonymReport &report, std::ostream &out);
// One row per homonym: name, category, entities (semicolon-joined).
void write_homonym_detail(const HomonymReport &report, std::ostream &out);

}  // namespace belhd

#endif  // BELHD_HOMONYMS_H_
