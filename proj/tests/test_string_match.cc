#include "belhd/string_match.h"

#include <random>

#include "belhd/errors.h"
#include "belhd/homonyms.h"
#include "belhd/text.h"
#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"

using namespace belhd;

TEST_CASE("normalize") {
  CHECK(normalize("Tourette's Syndrome") == "tourettessyndrome");
  CHECK(normalize("A2M") == "a2m");
  CHECK(normalize("---") == "");
  CHECK(normalize("α2-Microglobulin") == "α2microglobulin");
}

TEST_CASE("similarity examples") {
  CHECK(similarity("discharge", "discharge") == 1.0);
  CHECK(similarity("abc", "abd") ==
        doctest::Approx(1.0 - 2.0 / 6.0).epsilon(1e-12));
  CHECK(similarity("a", "b") == 0.0);
  CHECK(similarity("", "--") == 1.0);
  CHECK(similarity("Discharge", "dis-charge") == 1.0);
  CHECK(similarity("abc", "") == 0.0);
}

TEST_CASE("weighted distance equals |a| + |b| - 2 LCS") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    std::u32string a, b;
    for (std::size_t i = rng() % 9; i > 0; --i) a += U'a' + rng() % 4;
    for (std::size_t i = rng() % 9; i > 0; --i) b += U'a' + rng() % 4;
    std::vector<std::vector<std::size_t>> lcs(
        a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i) {
      for (std::size_t j = 1; j <= b.size(); ++j) {
        lcs[i][j] = a[i - 1] == b[j - 1]
                        ? lcs[i - 1][j - 1] + 1
                        : std::max(lcs[i - 1][j], lcs[i][j - 1]);
      }
    }
    CHECK(weighted_levenshtein(a, b) ==
          a.size() + b.size() - 2 * lcs[a.size()][b.size()]);
  }
}

TEST_CASE("property: symmetry, range and identity against the oracle") {
  std::mt19937_64 rng(5);
  const std::u32string alphabet = U"abα-B";
  for (int t = 0; t < 2000; ++t) {
    std::u32string a, b;
    for (std::size_t i = rng() % 7; i > 0; --i) a += alphabet[rng() % 5];
    for (std::size_t i = rng() % 7; i > 0; --i) b += alphabet[rng() % 5];
    const std::string sa = text::encode(a), sb = text::encode(b);
    const double s = similarity(sa, sb);
    CHECK(s == similarity(sb, sa));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK((s == 1.0) == (normalize(sa) == normalize(sb)));
    const double expected = oracle::similarity(text::decode(normalize(sa)),
                                               text::decode(normalize(sb)));
    CHECK(s == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("affected mentions") {
  const Kb kb = fixtures::discharge_kb();
  const auto corpus = fixtures::corpus_from(
      R"({"id":"d1","text":"Discharge was noted. Patient discharge followed.","mentions":[)"
      R"({"start":0,"end":9,"gold":[30685]},)"
      R"({"start":21,"end":38,"gold":[30685]},)"
      R"({"start":21,"end":38,"gold":[600083]},)"
      R"({"start":29,"end":38,"gold":[600083]}]})"
      "\n");
  const AffectedReport report =
      estimate_affected(corpus, kb, find_ambiguous_names(kb));
  REQUIRE(report.total == 4);
  CHECK(report.mentions[0].affected);
  CHECK(report.mentions[0].matched_homonym == "Discharge");
  CHECK_FALSE(report.mentions[1].affected);
  CHECK_FALSE(report.mentions[2].affected);
  CHECK(report.mentions[3].affected);
  CHECK(report.affected == 2);
  CHECK(report.fraction() == 0.5);
}

TEST_CASE("affected estimation rejects gold entities missing from the KB") {
  const Kb kb = fixtures::discharge_kb();
  const auto corpus = fixtures::corpus_from(
      R"({"id":"d1","text":"Discharge.","mentions":[{"start":0,"end":9,"gold":[1]}]})"
      "\n");
  CHECK_THROWS_AS(estimate_affected(corpus, kb, find_ambiguous_names(kb)),
                  ValidationError);
}
