#include "belhd/kb.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "belhd/errors.h"
#include "belhd/text.h"

namespace belhd {
namespace {

template <typename T>
bool parse_int(std::string_view field, T &value) {
  field = text::trim(field);
  if (field.empty()) return false;
  const char *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  return ec == std::errc() && ptr == end;
}

KbRecord parse_row(std::string_view line, std::size_t line_no) {
  const auto fields = text::split(line, '\t');
  if (fields.size() != 5) {
    throw ParseError(line_no, "expected 5 tab-separated columns, got " +
                                  std::to_string(fields.size()));
  }
  KbRecord record;
  if (!parse_int(fields[0], record.uid)) {
    throw ParseError(line_no, "uid is not an integer: '" +
                                  std::string(fields[0]) + "'");
  }
  if (!parse_int(fields[1], record.identifier)) {
    throw ParseError(line_no, "identifier is not an integer: '" +
                                  std::string(fields[1]) + "'");
  }
  if (!parse_int(fields[2], record.description) || record.description < 0) {
    throw ParseError(line_no, "description is not a non-negative integer: '" +
                                  std::string(fields[2]) + "'");
  }
  if (text::trim(fields[3]).empty()) {
    throw ParseError(line_no, "empty name");
  }
  record.name = std::string(fields[3]);
  if (!text::trim(fields[4]).empty()) {
    SpeciesId species = 0;
    if (!parse_int(fields[4], species)) {
      throw ParseError(line_no, "species is not an integer: '" +
                                    std::string(fields[4]) + "'");
    }
    record.species = species;
  }
  return record;
}

const std::set<NameLabel> kNoLabels;
const std::vector<std::size_t> kNoRows;

}  // namespace

Kb Kb::FromRecords(std::vector<KbRecord> records, const ParseOptions &options) {
  {
    std::set<Uid> seen;
    for (const KbRecord &r : records) {
      if (!seen.insert(r.uid).second) {
        throw ValidationError("duplicate uid " + std::to_string(r.uid));
      }
      if (text::trim(r.name).empty()) {
        throw ValidationError("record " + std::to_string(r.uid) +
                              " has an empty name");
      }
      if (r.name.find_first_of("\t\n") != std::string::npos) {
        throw ValidationError("record " + std::to_string(r.uid) +
                              " has a name containing a tab or newline");
      }
    }
  }

  // Lowest uid per (identifier, name); other copies are dropped.
  std::map<std::pair<EntityId, std::string_view>, Uid> keep;
  for (const KbRecord &r : records) {
    auto [it, inserted] = keep.try_emplace({r.identifier, r.name}, r.uid);
    if (!inserted) it->second = std::min(it->second, r.uid);
  }

  std::vector<char> kept(records.size(), 1);
  if (options.collapse_duplicates) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      kept[i] = keep.at({records[i].identifier, records[i].name}) ==
                records[i].uid;
    }
  }
  Kb kb;
  kb.records_.reserve(keep.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (kept[i]) kb.records_.push_back(std::move(records[i]));
  }
  for (std::size_t row = 0; row < kb.records_.size(); ++row) {
    const KbRecord &r = kb.records_[row];
    kb.by_name_[r.name].emplace(r.identifier, r.species);
    kb.by_entity_[r.identifier].push_back(row);
  }

  for (const auto &[identifier, rows] : kb.by_entity_) {
    const auto preferred = static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [&](std::size_t row) {
          return kb.records_[row].is_preferred();
        }));
    if (preferred != 1) kb.issues_.push_back({identifier, preferred});
  }
  if (options.strict && !kb.issues_.empty()) {
    std::ostringstream msg;
    msg << kb.issues_.size()
        << " entities without exactly one preferred name:";
    const std::size_t shown = std::min<std::size_t>(kb.issues_.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      msg << ' ' << kb.issues_[i].identifier << " ("
          << kb.issues_[i].preferred_count << ")";
    }
    if (shown < kb.issues_.size()) msg << " ...";
    throw ValidationError(msg.str());
  }
  return kb;
}

std::set<EntityId> Kb::entities_of(std::string_view name) const {
  std::set<EntityId> out;
  for (const auto &[identifier, species] : labels_of(name)) {
    out.insert(identifier);
  }
  return out;
}

const std::set<NameLabel> &Kb::labels_of(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoLabels : it->second;
}

const std::vector<std::size_t> &Kb::rows_of(EntityId identifier) const {
  auto it = by_entity_.find(identifier);
  return it == by_entity_.end() ? kNoRows : it->second;
}

std::optional<std::size_t> Kb::preferred_row(EntityId identifier) const {
  std::optional<std::size_t> best;
  for (std::size_t row : rows_of(identifier)) {
    if (!records_[row].is_preferred()) continue;
    if (!best || records_[row].uid < records_[*best].uid) best = row;
  }
  return best;
}

const std::string &Kb::preferred_name(EntityId identifier) const {
  if (!contains(identifier)) {
    throw NotFoundError("unknown entity " + std::to_string(identifier));
  }
  const bool flagged =
      std::any_of(issues_.begin(), issues_.end(),
                  [&](const auto &i) { return i.identifier == identifier; });
  if (flagged) {
    throw InvariantError("entity " + std::to_string(identifier) +
                         " does not have exactly one preferred name");
  }
  return records_[*preferred_row(identifier)].name;
}

std::vector<EntityId> Kb::entities() const {
  std::vector<EntityId> out;
  out.reserve(by_entity_.size());
  for (const auto &[identifier, rows] : by_entity_) out.push_back(identifier);
  return out;
}

std::vector<std::string> Kb::names() const {
  std::vector<std::string> out;
  out.reserve(by_name_.size());
  for (const auto &[name, labels] : by_name_) out.push_back(name);
  return out;
}

bool Kb::species_populated() const {
  return !records_.empty() &&
         std::all_of(records_.begin(), records_.end(),
                     [](const KbRecord &r) { return r.species.has_value(); });
}

bool Kb::has_species() const {
  return std::any_of(records_.begin(), records_.end(),
                     [](const KbRecord &r) { return r.species.has_value(); });
}

Kb parse_kb(std::istream &in, const ParseOptions &options) {
  std::vector<KbRecord> records;
  std::set<Uid> uids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    KbRecord record = parse_row(line, line_no);
    if (!uids.insert(record.uid).second) {
      throw ParseError(line_no, "duplicate uid " + std::to_string(record.uid));
    }
    records.push_back(std::move(record));
  }
  return Kb::FromRecords(std::move(records), options);
}

Kb parse_kb(const std::filesystem::path &path, const ParseOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open KB file " + path.string());
  return parse_kb(in, options);
}

void write_kb(const Kb &kb, std::ostream &out) {
  for (const KbRecord &r : kb.records()) {
    out << r.uid << '\t' << r.identifier << '\t' << r.description << '\t'
        << r.name << '\t';
    if (r.species) out << *r.species;
    out << '\n';
  }
}

void write_kb(const Kb &kb, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_kb(kb, out);
}

}  // namespace belhd
