#ifndef BELHD_KB_H_
#define BELHD_KB_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace belhd {

using Uid = std::int64_t;
using EntityId = std::int64_t;
using SpeciesId = std::int64_t;

// Description code of the preferred name. Other codes (abbreviation, synonym,
// ...) are kept verbatim but only the preferred/other split is interpreted.
inline constexpr int kPreferredDescription = 0;

// One KB row: uid, identifier, description, name, species.
struct KbRecord {
  Uid uid = 0;
  EntityId identifier = 0;
  int description = kPreferredDescription;
  std::string name;
  std::optional<SpeciesId> species;

  bool is_preferred() const { return description == kPreferredDescription; }

  friend bool operator==(const KbRecord &, const KbRecord &) = default;
};

// Entity whose number of preferred names is not exactly one.
struct PreferredNameIssue {
  EntityId identifier = 0;
  std::size_t preferred_count = 0;

  friend bool operator==(const PreferredNameIssue &,
                         const PreferredNameIssue &) = default;
};

struct ParseOptions {
  // Strict mode turns preferred-name issues into a ValidationError; lenient
  // mode keeps them in Kb::issues().
  bool strict = true;
  // Drop duplicate (identifier, name) rows, keeping the lowest uid. Rewritten
  // KBs disable this so record counts are conserved.
  bool collapse_duplicates = true;
};

// (identifier, species) pair a name labels.
using NameLabel = std::pair<EntityId, std::optional<SpeciesId>>;

// Immutable, indexed knowledge base.
class Kb {
 public:
  Kb() = default;

  // Collapses duplicate (identifier, name) rows keeping the lowest uid,
  // indexes the remaining rows and validates preferred-name uniqueness.
  // Throws ValidationError on duplicate uids, empty names, or (strict mode)
  // preferred-name issues.
  static Kb FromRecords(std::vector<KbRecord> records,
                        const ParseOptions &options = {});

  const std::vector<KbRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // V_KB(name): entities labeled by `name`, byte-exact lookup.
  std::set<EntityId> entities_of(std::string_view name) const;

  // (identifier, species) pairs labeled by `name`; empty when absent.
  const std::set<NameLabel> &labels_of(std::string_view name) const;

  // Row indices of the records of `identifier`, in row order.
  const std::vector<std::size_t> &rows_of(EntityId identifier) const;

  bool contains(EntityId identifier) const {
    return by_entity_.count(identifier) != 0;
  }

  // Throws NotFoundError for unknown entities and InvariantError for entities
  // that failed the preferred-name check (lenient mode only).
  const std::string &preferred_name(EntityId identifier) const;

  // Row of the preferred record, or nullopt if the entity has none. When an
  // entity has several preferred records, the lowest uid wins.
  std::optional<std::size_t> preferred_row(EntityId identifier) const;

  // Sorted list of all identifiers.
  std::vector<EntityId> entities() const;

  // Distinct names, sorted byte-wise.
  std::vector<std::string> names() const;

  // True when every record carries a species.
  bool species_populated() const;
  // True when at least one record carries a species.
  bool has_species() const;

  const std::vector<PreferredNameIssue> &issues() const { return issues_; }

  friend bool operator==(const Kb &a, const Kb &b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<KbRecord> records_;
  std::map<std::string, std::set<NameLabel>, std::less<>> by_name_;
  std::map<EntityId, std::vector<std::size_t>> by_entity_;
  std::vector<PreferredNameIssue> issues_;
};

Kb parse_kb(std::istream &in, const ParseOptions &options = {});
Kb parse_kb(const std::filesystem::path &path, const ParseOptions &options = {});

// Writes the 5-column tab-separated format parse_kb reads.
void write_kb(const Kb &kb, std::ostream &out);
void write_kb(const Kb &kb, const std::filesystem::path &path);

}  // namespace belhd

#endif  // BELHD_KB_H_
