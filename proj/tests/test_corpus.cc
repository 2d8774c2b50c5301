#include "belhd/corpus.h"

#include <sstream>

#include "belhd/errors.h"
#include "doctest.h"
#include "fixtures.h"

using namespace belhd;
using fixtures::corpus_from;

TEST_CASE("surface forms are materialized from offsets") {
  const auto docs = corpus_from(
      R"({"id":"fig1","text":"Discharge was noted.","mentions":[{"start":0,"end":9,"gold":[600083]}]})"
      "\n");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].mentions[0].surface == "Discharge");
  CHECK(docs[0].mentions[0].gold == std::set<EntityId>{600083});
  CHECK(docs[0].sentences_inferred);
  CHECK(docs[0].sentences == std::vector<Span>{{0, 20}});
}

TEST_CASE("offsets count codepoints") {
  const auto docs = corpus_from(
      R"({"id":"u","text":"Low α2microglobulin levels.","mentions":[{"start":4,"end":19,"gold":[2]}]})"
      "\n");
  CHECK(docs[0].mentions[0].surface == "α2microglobulin");
}

TEST_CASE("validation errors name the document") {
  try {
    corpus_from(
        R"({"id":"bad","text":"Short.","mentions":[{"start":0,"end":40,"gold":[1]}]})"
        "\n"
        R"({"id":"empty","text":"Short.","mentions":[{"start":0,"end":5,"gold":[]}]})"
        "\n");
    FAIL("expected CorpusError");
  } catch (const CorpusError &e) {
    REQUIRE(e.issues().size() == 2);
    CHECK(e.issues()[0].find("bad") != std::string::npos);
    CHECK(e.issues()[1].find("empty") != std::string::npos);
  }
  CHECK_THROWS_AS(
      corpus_from(
          R"({"id":"s","text":"Short.","mentions":[{"start":0,"end":5,"gold":[1],"surface":"Shirt"}]})"
          "\n"),
      CorpusError);
  CHECK_THROWS_AS(corpus_from("{not json}\n"), ParseError);
}

TEST_CASE("mentions are assigned to sentences") {
  const auto docs = corpus_from(
      R"({"id":"a","text":"Motor tic and vocal tic. Tic disorder.","sentences":[[0,24],[25,38]],)"
      R"("mentions":[{"start":0,"end":9,"gold":[1]},{"start":14,"end":23,"gold":[2]},{"start":25,"end":37,"gold":[3]}]})"
      "\n");
  CHECK(docs[0].mentions[0].sentence == 0u);
  CHECK(docs[0].mentions[1].sentence == 0u);
  CHECK(docs[0].mentions[2].sentence == 1u);
  CHECK_FALSE(docs[0].sentences_inferred);
}

TEST_CASE("mentions crossing supplied sentences are rejected") {
  CHECK_THROWS_AS(
      corpus_from(
          R"({"id":"x","text":"One two. Three.","sentences":[[0,8],[9,15]],"mentions":[{"start":4,"end":13,"gold":[1]}]})"
          "\n"),
      CorpusError);
  CHECK_THROWS_AS(
      corpus_from(
          R"({"id":"x","text":"One two. Three.","sentences":[[0,9],[5,15]],"mentions":[]})"
          "\n"),
      CorpusError);
}

TEST_CASE("inferred sentences never cut a mention") {
  const auto docs = corpus_from(
      R"({"id":"x","text":"See Fig. 2 now. Done here.","mentions":[{"start":4,"end":15,"gold":[1]},{"start":16,"end":20,"gold":[2]}]})"
      "\n");
  const Document &d = docs[0];
  for (const Mention &m : d.mentions) {
    REQUIRE(m.sentence.has_value());
    CHECK(d.sentences[*m.sentence].contains({m.start, m.end}));
  }
}

TEST_CASE("sentence splitter") {
  CHECK(split_sentences("First one. Second one.") ==
        std::vector<Span>{{0, 10}, {11, 22}});
  CHECK(split_sentences("Treated with e.g. aspirin. Then stopped.") ==
        std::vector<Span>{{0, 26}, {27, 40}});
  CHECK(split_sentences("Dr. Smith saw J. Doe today.").size() == 1);
  CHECK(split_sentences("It rose. and then fell.").size() == 1);
  CHECK(split_sentences("Was it? Yes!") == std::vector<Span>{{0, 7}, {8, 12}});
  CHECK(split_sentences("Title\n\nBody text") ==
        std::vector<Span>{{0, 5}, {7, 16}});
  CHECK(split_sentences("  ").empty());
  CHECK(split_sentences("He said \"stop.\" Then left.").size() == 2);
}

TEST_CASE("round trip") {
  const std::string line =
      R"({"id":"r","text":"α-tic and β-tic. Second.","sentences":[[0,16],[17,24]],)"
      R"("mentions":[{"start":0,"end":5,"gold":[4,2]},{"start":10,"end":15,"gold":[3]}]})"
      "\n";
  const auto docs = corpus_from(line);
  std::ostringstream out;
  write_corpus(docs, out);
  CHECK(corpus_from(out.str()) == docs);
  CHECK(count_mentions(docs) == 2);
}

TEST_CASE("mention_text is relative to the sentence") {
  const auto docs = corpus_from(
      R"({"id":"m","text":"First. The α tic here.","mentions":[{"start":11,"end":16,"gold":[1]}]})"
      "\n");
  const MentionText mt = mention_text(docs[0], docs[0].mentions[0]);
  CHECK(mt.sentence == "The α tic here.");
  CHECK(mt.surface == "α tic");
  CHECK(mt.start == 4);
  CHECK(mt.end == 9);
}
