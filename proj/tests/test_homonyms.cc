#include "belhd/homonyms.h"

#include <random>
#include <sstream>

#include "belhd/errors.h"
#include "doctest.h"
#include "fixtures.h"

using namespace belhd;
using fixtures::kb_from;

TEST_CASE("intra-species homonyms group by species") {
  const Kb kb = kb_from(
      "1\t81618\t0\tBRI3\t9606\n"
      "2\t25798\t0\tBRI3 binding protein\t9606\n"
      "3\t25798\t1\tBRI3\t9606\n");
  CHECK(find_homonyms(kb) ==
        HomonymMap{{"BRI3", {25798, 81618}}});
  CHECK(find_cross_species_homonyms(kb).empty());
}

TEST_CASE("a name shared across species is not an intra-species homonym") {
  const Kb kb = kb_from(
      "1\t2\t0\tA2M\t9606\n"
      "2\t280706\t0\tA2M\t9913\n");
  CHECK(find_homonyms(kb).empty());
  CHECK(find_cross_species_homonyms(kb) ==
        HomonymMap{{"A2M", {2, 280706}}});
}

TEST_CASE("unique names have no homonyms") {
  CHECK(find_homonyms(kb_from("1\t1\t0\tA\t\n2\t2\t0\tB\t\n")).empty());
}

TEST_CASE("cross-species detection needs species") {
  CHECK_THROWS_AS(find_cross_species_homonyms(fixtures::discharge_kb()),
                  UnsupportedError);
}

TEST_CASE("records without species form their own bucket") {
  const Kb kb = kb_from(
      "1\t1\t0\tX\t\n"
      "2\t2\t0\tX\t9606\n"
      "3\t3\t0\tY\t\n"
      "4\t4\t0\tY\t\n",
      ParseOptions{});
  CHECK(find_homonyms(kb) == HomonymMap{{"Y", {3, 4}}});
  CHECK(find_ambiguous_names(kb) == HomonymMap{{"X", {1, 2}}, {"Y", {3, 4}}});
}

TEST_CASE("report: ten names, two homonymous") {
  std::string tsv;
  for (int e = 1; e <= 8; ++e) {
    tsv += std::to_string(e) + "\t" + std::to_string(e) + "\t0\tName" +
           std::to_string(e) + "\t\n";
  }
  tsv += "9\t1\t1\tName2\t\n10\t3\t1\tName4\t\n";
  const HomonymReport r = homonym_report(kb_from(tsv));
  CHECK(r.total_names == 10);
  CHECK(r.homonyms == 2);
  CHECK(r.fraction(r.homonyms) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.preferred_homonyms == 2);
  CHECK(r.other_homonyms == 0);
}

TEST_CASE("report categories on the worked examples") {
  const HomonymReport discharge = homonym_report(fixtures::discharge_kb());
  CHECK(discharge.homonyms == 1);
  CHECK(discharge.preferred_homonyms == 0);
  CHECK(discharge.other_homonyms == 1);
  CHECK_FALSE(discharge.cross_species_checked);

  const Kb a2m = kb_from(
      "1\t2\t0\tA2M\t9606\n"
      "2\t2\t1\tα2microglobulin\t9606\n"
      "3\t280706\t0\tA2M\t9913\n");
  const HomonymReport r = homonym_report(a2m);
  CHECK(r.preferred_homonyms == 1);
  CHECK(r.cross_species_homonyms == 1);
  CHECK(r.homonyms == 1);
}

TEST_CASE("report writers") {
  const HomonymReport r = homonym_report(fixtures::discharge_kb());
  std::ostringstream kv;
  write_report_kv(r, kv);
  CHECK(kv.str().find("homonyms=1\n") != std::string::npos);
  CHECK(kv.str().find("cross_species_homonyms=NA\n") != std::string::npos);
  std::ostringstream detail;
  write_homonym_detail(r, detail);
  CHECK(detail.str().find("Discharge\tintra\t30685;600083") !=
        std::string::npos);
}

TEST_CASE("property: homonym map equals a pairwise scan") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<KbRecord> records;
    const int entities = 1 + static_cast<int>(rng() % 6);
    Uid uid = 1;
    for (int e = 0; e < entities; ++e) {
      const auto species = static_cast<SpeciesId>(rng() % 3);
      const int names = 1 + static_cast<int>(rng() % 3);
      for (int n = 0; n < names; ++n) {
        records.push_back({uid++, e, n == 0 ? 0 : 1,
                           std::string(1, static_cast<char>('a' + rng() % 4)),
                           species});
      }
    }
    const Kb kb = Kb::FromRecords(records, ParseOptions{.strict = false});
    HomonymMap expected;
    const auto &rs = kb.records();
    for (const auto &a : rs) {
      for (const auto &b : rs) {
        if (a.name == b.name && a.species == b.species &&
            a.identifier != b.identifier) {
          expected[a.name].insert({a.identifier, b.identifier});
        }
      }
    }
    const HomonymMap found = find_homonyms(kb);
    CHECK(found == expected);
    const HomonymReport report = homonym_report(kb);
    CHECK(report.homonyms <= report.total_names);
    for (const auto &[name, ids] : found) CHECK(kb.entities_of(name).size() > 1);
  }
}
