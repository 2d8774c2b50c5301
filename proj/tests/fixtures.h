#ifndef BELHD_TESTS_FIXTURES_H_
#define BELHD_TESTS_FIXTURES_H_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "belhd/corpus.h"
#include "belhd/kb.h"

namespace belhd::fixtures {

// CUI-like identifiers as integers: C0030685 -> 30685.
inline constexpr EntityId kPatientDischarge = 30685;
inline constexpr EntityId kBodyFluidDischarge = 600083;

inline Kb kb_from(const std::string &tsv, const ParseOptions &options = {}) {
  std::istringstream in(tsv);
  return parse_kb(in, options);
}

// Two UMLS concepts sharing "Discharge" as a synonym.
inline Kb discharge_kb() {
  return kb_from(
      "1\t30685\t0\tPatient Discharge\t\n"
      "2\t30685\t1\tDischarge\t\n"
      "3\t600083\t0\tBody Fluid Discharge\t\n"
      "4\t600083\t1\tDischarge\t\n");
}

// Human A2M (2), cattle A2M (280706) and human IGHA2 (3494), which lists
// A2M as a secondary name.
inline Kb a2m_kb() {
  return kb_from(
      "1\t2\t0\tA2M\t9606\n"
      "2\t2\t1\tα2microglobulin\t9606\n"
      "3\t2\t1\talpha-2-macroglobulin\t9606\n"
      "4\t280706\t0\tA2M\t9913\n"
      "5\t280706\t1\talpha-2-macroglobulin precursor\t9913\n"
      "6\t3494\t0\tIGHA2\t9606\n"
      "7\t3494\t1\tA2M\t9606\n");
}

inline std::string a2m_taxonomy() { return "9606\thuman\n9913\tcattle\n"; }

// Two vitamin B12 forms listing each other's preferred name.
inline Kb cobalamin_kb() {
  return kb_from(
      "1\t1\t0\tHydroxocobalamin\t\n"
      "2\t1\t1\tAquacobalamin\t\n"
      "3\t2\t0\tAquacobalamin\t\n"
      "4\t2\t1\tHydroxocobalamin\t\n");
}

inline std::vector<Document> corpus_from(const std::string &jsonl) {
  std::istringstream in(jsonl);
  return parse_corpus(in);
}

inline std::filesystem::path temp_dir(const std::string &name) {
  const std::filesystem::path dir = std::filesystem::path(BELHD_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path &path,
                       const std::string &content) {
  std::ofstream(path, std::ios::binary) << content;
}

inline std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace belhd::fixtures

#endif  // BELHD_TESTS_FIXTURES_H_
