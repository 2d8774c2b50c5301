#ifndef BELHD_DISAMBIGUATION_H_
#define BELHD_DISAMBIGUATION_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "belhd/homonyms.h"
#include "belhd/kb.h"

namespace belhd {

// Species id -> species name used as the cross-species disambiguator.
using Taxonomy = std::map<SpeciesId, std::string>;

// Two tab-separated columns: species id, species name.
Taxonomy parse_taxonomy(std::istream &in);
Taxonomy parse_taxonomy(const std::filesystem::path &path);

enum class RewriteRule {
  kPreferred,  // non-preferred homonym extended with the preferred name
  kShortest,   // preferred-name homonym extended with the shortest other name
  kSpecies,    // cross-species component only
  kDefault,    // left unmodified as the default meaning
  kResidual,   // still homonymous after rewriting
};

std::string_view rule_name(RewriteRule rule);

struct NameRewrite {
  Uid uid = 0;
  std::string original;
  std::optional<std::string> disambiguator;
  std::optional<std::string> species;
  std::string final_name;
  RewriteRule rule = RewriteRule::kPreferred;

  // Text inside the trailing parentheses, empty when the name is unchanged.
  std::string parenthetical() const;
};

struct DisambiguatedKb {
  Kb kb;
  // Every homonym instance touched by a pass, keyed by uid.
  std::map<Uid, NameRewrite> rewrites;
  // Names of the input KB labeling more than one entity.
  HomonymMap original_homonyms;
  // Final names still labeling more than one entity.
  HomonymMap residual_homonyms;
  // Original homonyms with at least one instance among residual names.
  std::size_t unresolved_homonyms = 0;
  double success_rate = 1.0;
};

// "ORIGINAL", "ORIGINAL (D)", "ORIGINAL (SPECIES)" or "ORIGINAL (D, SPECIES)".
std::string compose_name(std::string_view original,
                         const std::optional<std::string> &disambiguator,
                         const std::optional<std::string> &species);

struct NameParts {
  std::string original;
  std::optional<std::string> disambiguator;
  std::optional<std::string> species;

  friend bool operator==(const NameParts &, const NameParts &) = default;
};

// Inverse of compose_name given the original text and the species text (if
// the name carries one). Returns nullopt when `final_name` does not follow
// the grammar.
std::optional<NameParts> decompose_name(
    std::string_view final_name, std::string_view original,
    const std::optional<std::string> &species);

// Appends the species name to every instance of a cross-species homonym.
// Throws UnsupportedError for KBs without species and NotFoundError for
// species missing from `taxonomy`.
DisambiguatedKb disambiguate_cross_species(const Kb &kb,
                                           const Taxonomy &taxonomy);

// Intra-species pass over `homonyms` (computed on the given KB).
DisambiguatedKb disambiguate_intra(const Kb &kb, const HomonymMap &homonyms);
// Intra-species pass composing with the species components of `staged`.
DisambiguatedKb disambiguate_intra(const DisambiguatedKb &staged,
                                   const HomonymMap &homonyms);

// Cross-species pass (when a taxonomy is given), then the intra-species pass
// on the recomputed homonym set.
DisambiguatedKb disambiguate(const Kb &kb, const Taxonomy *taxonomy);

// Rows: uid, original, final, disambiguator, rule.
void write_audit(const DisambiguatedKb &result, std::ostream &out);

}  // namespace belhd

#endif  // BELHD_DISAMBIGUATION_H_
