#include "belhd/homonyms.h"

#include <cstdio>
#include <optional>
#include <ostream>

#include "belhd/errors.h"

namespace belhd {
namespace {

std::string format_fraction(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string join_entities(const std::set<EntityId> &entities) {
  std::string out;
  for (EntityId e : entities) {
    if (!out.empty()) out += ';';
    out += std::to_string(e);
  }
  return out;
}

}  // namespace

HomonymMap find_homonyms(const Kb &kb) {
  HomonymMap out;
  for (const std::string &name : kb.names()) {
    std::map<std::optional<SpeciesId>, std::set<EntityId>> groups;
    for (const auto &[identifier, species] : kb.labels_of(name)) {
      groups[species].insert(identifier);
    }
    for (const auto &[species, entities] : groups) {
      if (entities.size() > 1) {
        out[name].insert(entities.begin(), entities.end());
      }
    }
  }
  return out;
}

HomonymMap find_cross_species_homonyms(const Kb &kb) {
  if (!kb.species_populated()) {
    if (kb.empty()) return {};
    throw UnsupportedError(
        "cross-species homonyms need the species column on every record");
  }
  HomonymMap out;
  for (const std::string &name : kb.names()) {
    std::set<EntityId> entities;
    std::set<SpeciesId> species;
    for (const auto &[identifier, sp] : kb.labels_of(name)) {
      entities.insert(identifier);
      species.insert(*sp);
    }
    if (entities.size() > 1 && species.size() > 1) {
      out.emplace(name, std::move(entities));
    }
  }
  return out;
}

HomonymMap find_ambiguous_names(const Kb &kb) {
  HomonymMap out;
  for (const std::string &name : kb.names()) {
    auto entities = kb.entities_of(name);
    if (entities.size() > 1) out.emplace(name, std::move(entities));
  }
  return out;
}

HomonymReport homonym_report(const Kb &kb) {
  HomonymReport report;
  report.total_names = kb.size();
  report.distinct_names = kb.names().size();
  report.intra = find_homonyms(kb);
  if (kb.species_populated()) {
    report.cross_species = find_cross_species_homonyms(kb);
    report.cross_species_checked = true;
  }
  std::set<std::string> all;
  for (const auto &[name, e] : report.intra) all.insert(name);
  for (const auto &[name, e] : report.cross_species) all.insert(name);

  std::set<std::string_view> preferred_names;
  for (const KbRecord &r : kb.records()) {
    if (r.is_preferred()) preferred_names.insert(r.name);
  }
  for (const std::string &name : all) {
    ++(preferred_names.count(name) ? report.preferred_homonyms
                                   : report.other_homonyms);
  }
  report.homonyms = all.size();
  report.cross_species_homonyms = report.cross_species.size();
  return report;
}

void write_report_kv(const HomonymReport &r, std::ostream &out) {
  out << "total_names=" << r.total_names << '\n'
      << "distinct_names=" << r.distinct_names << '\n'
      << "homonyms=" << r.homonyms << '\n'
      << "homonyms_fraction=" << format_fraction(r.fraction(r.homonyms))
      << '\n'
      << "preferred_name_homonyms=" << r.preferred_homonyms << '\n'
      << "other_name_homonyms=" << r.other_homonyms << '\n';
  if (r.cross_species_checked) {
    out << "cross_species_homonyms=" << r.cross_species_homonyms << '\n';
  } else {
    out << "cross_species_homonyms=NA\n";
  }
}

void write_report_tsv(const HomonymReport &r, std::ostream &out) {
  out << "metric\tcount\tfraction\n";
  const auto row = [&](const char *metric, std::size_t count) {
    out << metric << '\t' << count << '\t'
        << format_fraction(r.fraction(count)) << '\n';
  };
  row("total_names", r.total_names);
  row("homonyms", r.homonyms);
  row("preferred_name_homonyms", r.preferred_homonyms);
  row("other_name_homonyms", r.other_homonyms);
  if (r.cross_species_checked) {
    row("cross_species_homonyms", r.cross_species_homonyms);
  }
}

void write_homonym_detail(const HomonymReport &r, std::ostream &out) {
  out << "name\tcategory\tentities\n";
  for (const auto &[name, entities] : r.intra) {
    out << name << "\tintra\t" << join_entities(entities) << '\n';
  }
  for (const auto &[name, entities] : r.cross_species) {
    out << name << "\tcross_species\t" << join_entities(entities) << '\n';
  }
}

}  // namespace belhd
