#include "belhd/disambiguation.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <vector>

#include "belhd/errors.h"
#include "belhd/text.h"

namespace belhd {
namespace {

// Per-record state shared by the two passes.
struct Working {
  std::string original;
  std::optional<std::string> disambiguator;
  std::optional<std::string> species;
  std::optional<RewriteRule> rule;
};

std::vector<Working> initial_state(const Kb &kb) {
  std::vector<Working> state;
  state.reserve(kb.size());
  for (const KbRecord &r : kb.records()) state.push_back({r.name, {}, {}, {}});
  return state;
}

std::vector<Working> staged_state(const DisambiguatedKb &staged) {
  std::vector<Working> state = initial_state(staged.kb);
  const auto &records = staged.kb.records();
  for (std::size_t row = 0; row < records.size(); ++row) {
    auto it = staged.rewrites.find(records[row].uid);
    if (it == staged.rewrites.end()) continue;
    // Residual status is recomputed by the next pass.
    std::optional<RewriteRule> rule;
    if (it->second.rule != RewriteRule::kResidual) {
      rule = it->second.rule;
    } else if (it->second.species) {
      rule = RewriteRule::kSpecies;
    }
    state[row] = {it->second.original, it->second.disambiguator,
                  it->second.species, rule};
  }
  return state;
}

// Applies `state` to `source` and fills the residual statistics against
// `original_homonyms`.
DisambiguatedKb finalize(const Kb &source, const std::vector<Working> &state,
                         HomonymMap original_homonyms) {
  DisambiguatedKb result;
  std::vector<KbRecord> records = source.records();
  for (std::size_t row = 0; row < records.size(); ++row) {
    const Working &w = state[row];
    if (!w.rule) continue;
    records[row].name = compose_name(w.original, w.disambiguator, w.species);
    result.rewrites.emplace(
        records[row].uid,
        NameRewrite{records[row].uid, w.original, w.disambiguator, w.species,
                    records[row].name, *w.rule});
  }
  result.kb = Kb::FromRecords(
      std::move(records), ParseOptions{.strict = false,
                                       .collapse_duplicates = false});
  result.residual_homonyms = find_ambiguous_names(result.kb);
  result.original_homonyms = std::move(original_homonyms);

  std::set<std::string> unresolved;
  for (const KbRecord &r : result.kb.records()) {
    if (!result.residual_homonyms.count(r.name)) continue;
    auto it = result.rewrites.find(r.uid);
    if (it == result.rewrites.end()) {
      it = result.rewrites
               .emplace(r.uid, NameRewrite{r.uid, r.name, {}, {}, r.name,
                                           RewriteRule::kResidual})
               .first;
    } else if (it->second.rule != RewriteRule::kDefault) {
      it->second.rule = RewriteRule::kResidual;
    }
    const std::string &original = it->second.original;
    if (result.original_homonyms.count(original)) unresolved.insert(original);
  }
  result.unresolved_homonyms = unresolved.size();
  const std::size_t total = result.original_homonyms.size();
  result.success_rate =
      total == 0 ? 1.0
                 : static_cast<double>(total - unresolved.size()) /
                       static_cast<double>(total);
  return result;
}

// Shortest other name of the entity, ties broken byte-wise. Lengths count
// codepoints of the original (pre-rewrite) text.
std::optional<std::size_t> shortest_other(const Kb &kb,
                                          const std::vector<Working> &state,
                                          EntityId entity, std::size_t row) {
  const auto &records = kb.records();
  std::optional<std::size_t> best;
  std::size_t best_length = 0;
  for (std::size_t other : kb.rows_of(entity)) {
    if (other == row || records[other].name == records[row].name) continue;
    const std::string &candidate = state[other].original;
    const std::size_t length = text::codepoint_length(candidate);
    if (!best || length < best_length ||
        (length == best_length && candidate < state[*best].original)) {
      best = other;
      best_length = length;
    }
  }
  return best;
}

DisambiguatedKb run_intra(const Kb &kb, std::vector<Working> state,
                          const HomonymMap &homonyms,
                          HomonymMap original_homonyms) {
  const auto &records = kb.records();
  // Case (c): preferred-name homonyms without any other name, per name.
  std::map<std::string, std::vector<std::pair<EntityId, std::size_t>>>
      no_alternative;

  for (EntityId entity : kb.entities()) {
    const std::optional<std::size_t> preferred = kb.preferred_row(entity);
    for (std::size_t row : kb.rows_of(entity)) {
      auto it = homonyms.find(records[row].name);
      if (it == homonyms.end() || !it->second.count(entity)) continue;
      Working &w = state[row];
      if (preferred && row != *preferred) {
        w.disambiguator = state[*preferred].original;
        w.rule = RewriteRule::kPreferred;
        continue;
      }
      if (auto other = shortest_other(kb, state, entity, row)) {
        w.disambiguator = state[*other].original;
        w.rule = RewriteRule::kShortest;
        continue;
      }
      no_alternative[records[row].name].emplace_back(entity, row);
    }
  }

  for (auto &[name, instances] : no_alternative) {
    std::sort(instances.begin(), instances.end());
    for (std::size_t i = 0; i < instances.size(); ++i) {
      state[instances[i].second].rule =
          i == 0 ? RewriteRule::kDefault : RewriteRule::kResidual;
    }
  }
  return finalize(kb, state, std::move(original_homonyms));
}

}  // namespace

std::string_view rule_name(RewriteRule rule) {
  switch (rule) {
    case RewriteRule::kPreferred:
      return "pref";
    case RewriteRule::kShortest:
      return "shortest";
    case RewriteRule::kSpecies:
      return "species";
    case RewriteRule::kDefault:
      return "default";
    case RewriteRule::kResidual:
      return "residual";
  }
  return "unknown";
}

std::string NameRewrite::parenthetical() const {
  if (disambiguator && species) return *disambiguator + ", " + *species;
  if (disambiguator) return *disambiguator;
  if (species) return *species;
  return {};
}

std::string compose_name(std::string_view original,
                         const std::optional<std::string> &disambiguator,
                         const std::optional<std::string> &species) {
  std::string out(original);
  if (!disambiguator && !species) return out;
  out += " (";
  if (disambiguator) {
    out += *disambiguator;
    if (species) out += ", ";
  }
  if (species) out += *species;
  out += ')';
  return out;
}

std::optional<NameParts> decompose_name(
    std::string_view final_name, std::string_view original,
    const std::optional<std::string> &species) {
  NameParts parts{std::string(original), {}, {}};
  if (final_name == original) {
    if (species) return std::nullopt;
    return parts;
  }
  const std::string_view open = " (";
  if (final_name.size() < original.size() + open.size() + 1 ||
      final_name.substr(0, original.size()) != original ||
      final_name.substr(original.size(), open.size()) != open ||
      final_name.back() != ')') {
    return std::nullopt;
  }
  std::string_view inner = final_name.substr(
      original.size() + open.size(),
      final_name.size() - original.size() - open.size() - 1);
  if (species) {
    if (inner == *species) {
      parts.species = species;
      return parts;
    }
    const std::string suffix = ", " + *species;
    if (inner.size() <= suffix.size() ||
        inner.substr(inner.size() - suffix.size()) != suffix) {
      return std::nullopt;
    }
    parts.species = species;
    inner.remove_suffix(suffix.size());
  }
  if (inner.empty()) return std::nullopt;
  parts.disambiguator = std::string(inner);
  return parts;
}

Taxonomy parse_taxonomy(std::istream &in) {
  Taxonomy taxonomy;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(line_no, "taxonomy rows need 2 tab-separated columns");
    }
    const std::string_view id_field = text::trim(fields[0]);
    SpeciesId id = 0;
    auto [ptr, ec] = std::from_chars(id_field.data(),
                                     id_field.data() + id_field.size(), id);
    if (ec != std::errc() || ptr != id_field.data() + id_field.size() ||
        id_field.empty()) {
      throw ParseError(line_no, "species id is not an integer: '" +
                                    std::string(fields[0]) + "'");
    }
    const std::string_view name = text::trim(fields[1]);
    if (name.empty()) throw ParseError(line_no, "empty species name");
    if (!taxonomy.emplace(id, std::string(name)).second) {
      throw ParseError(line_no, "duplicate species id " + std::to_string(id));
    }
  }
  return taxonomy;
}

Taxonomy parse_taxonomy(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open taxonomy file " + path.string());
  return parse_taxonomy(in);
}

DisambiguatedKb disambiguate_cross_species(const Kb &kb,
                                           const Taxonomy &taxonomy) {
  const HomonymMap cross = find_cross_species_homonyms(kb);
  std::vector<Working> state = initial_state(kb);
  const auto &records = kb.records();
  for (std::size_t row = 0; row < records.size(); ++row) {
    if (!cross.count(records[row].name)) continue;
    const SpeciesId species = *records[row].species;
    auto it = taxonomy.find(species);
    if (it == taxonomy.end()) {
      throw NotFoundError("unknown species " + std::to_string(species));
    }
    state[row].species = it->second;
    state[row].rule = RewriteRule::kSpecies;
  }
  return finalize(kb, state, find_ambiguous_names(kb));
}

DisambiguatedKb disambiguate_intra(const Kb &kb, const HomonymMap &homonyms) {
  return run_intra(kb, initial_state(kb), homonyms, find_ambiguous_names(kb));
}

DisambiguatedKb disambiguate_intra(const DisambiguatedKb &staged,
                                   const HomonymMap &homonyms) {
  return run_intra(staged.kb, staged_state(staged), homonyms,
                   staged.original_homonyms);
}

DisambiguatedKb disambiguate(const Kb &kb, const Taxonomy *taxonomy) {
  if (taxonomy) {
    const DisambiguatedKb staged = disambiguate_cross_species(kb, *taxonomy);
    return disambiguate_intra(staged, find_homonyms(staged.kb));
  }
  if (kb.species_populated() && !find_cross_species_homonyms(kb).empty()) {
    throw UnsupportedError(
        "KB has cross-species homonyms; a taxonomy mapping is required");
  }
  return disambiguate_intra(kb, find_homonyms(kb));
}

void write_audit(const DisambiguatedKb &result, std::ostream &out) {
  out << "uid\toriginal\tfinal\tdisambiguator\trule\n";
  for (const KbRecord &r : result.kb.records()) {
    auto it = result.rewrites.find(r.uid);
    if (it == result.rewrites.end()) continue;
    const NameRewrite &w = it->second;
    out << w.uid << '\t' << w.original << '\t' << w.final_name << '\t'
        << w.parenthetical() << '\t' << rule_name(w.rule) << '\n';
  }
}

}  // namespace belhd
