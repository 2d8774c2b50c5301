#include "belhd/text.h"

#include <stdexcept>

#include "doctest.h"

using namespace belhd;

TEST_CASE("codepoint offsets count scalar values, not bytes") {
  const std::string s = "α2m";
  CHECK(s.size() == 4);
  CHECK(text::codepoint_length(s) == 3);
  CHECK(text::codepoint_offsets(s) == std::vector<std::size_t>{0, 2, 3, 4});
  CHECK(text::slice(s, 0, 1) == "α");
  CHECK(text::slice(s, 1, 3) == "2m");
  CHECK_THROWS_AS(text::slice(s, 2, 4), std::out_of_range);
}

TEST_CASE("decode replaces invalid sequences and round-trips valid input") {
  CHECK(text::decode("\xff") == std::u32string(1, U'�'));
  const std::string s = "Tourette’s α-syndrome";
  CHECK(text::encode(text::decode(s)) == s);
}

TEST_CASE("lowercase and character classes") {
  CHECK(text::lowercase("A2M ΑΒΓ") == "a2m αβγ");
  CHECK(text::is_alnum(U'α'));
  CHECK(text::is_alnum(U'7'));
  CHECK_FALSE(text::is_alnum(U'-'));
  CHECK(text::is_space(U' '));
  CHECK(text::trim("  x y \t") == "x y");
  CHECK(text::split("a\t\tb", '\t') ==
        std::vector<std::string_view>{"a", "", "b"});
}
