#include <set>
#include <string>

#include "belhd/corpus.h"
#include "belhd/text.h"

namespace belhd {
namespace {

const std::set<std::u32string> &abbreviations() {
  static const std::set<std::u32string> kAbbreviations = {
      U"al",     U"approx", U"ca",   U"cf",    U"dr",   U"e.g",  U"eg",
      U"et",     U"etc",    U"fig",  U"figs",  U"i.e",  U"ie",   U"inc",
      U"mr",     U"mrs",    U"ms",   U"no",    U"nos",  U"prof", U"ref",
      U"refs",   U"resp",   U"sp",   U"spp",   U"st",   U"subsp", U"tab",
      U"vol",    U"vs",     U"viz",  U"jr",    U"sr",   U"co",   U"ltd",
      U"var",    U"eq",     U"eqs",  U"min",   U"max",  U"approx",
  };
  return kAbbreviations;
}

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closing(char32_t c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == U'}' ||
         c == U'»' || c == U'”' || c == U'’';
}

// Token immediately before position `dot`, without leading brackets/quotes.
std::u32string token_before(const std::u32string &cps, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !text::is_space(cps[begin - 1])) --begin;
  while (begin < dot && !text::is_alnum(cps[begin])) ++begin;
  std::u32string token;
  for (std::size_t i = begin; i < dot; ++i) token += text::to_lower(cps[i]);
  return token;
}

bool guarded(const std::u32string &cps, std::size_t dot) {
  const std::u32string token = token_before(cps, dot);
  if (token.empty()) return false;
  if (token.size() == 1 && text::is_alnum(token[0]) &&
      !(token[0] >= U'0' && token[0] <= U'9')) {
    return true;  // initial, e.g. "J. Smith"
  }
  // Dotted abbreviation such as "e.g." or "U.S.".
  if (token.find(U'.') != std::u32string::npos) return true;
  return abbreviations().count(token) != 0;
}

}  // namespace

std::vector<Span> split_sentences(std::string_view utf8) {
  const std::u32string cps = text::decode(utf8);
  const std::size_t n = cps.size();
  std::vector<Span> out;

  const auto skip_space = [&](std::size_t i) {
    while (i < n && text::is_space(cps[i])) ++i;
    return i;
  };
  const auto emit = [&](std::size_t start, std::size_t end) {
    while (end > start && text::is_space(cps[end - 1])) --end;
    if (end > start) out.push_back({start, end});
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    if (cps[i] == U'\n') {
      std::size_t j = i;
      std::size_t newlines = 0;
      while (j < n && text::is_space(cps[j])) newlines += cps[j++] == U'\n';
      if (newlines >= 2) {
        emit(start, i);
        start = i = j;
        continue;
      }
    }
    if (!is_terminal(cps[i])) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < n && (is_terminal(cps[end]) || is_closing(cps[end]))) ++end;
    if (end < n && !text::is_space(cps[end])) {
      i = end;
      continue;
    }
    const std::size_t next = skip_space(end);
    const bool lower_next = next < n && text::is_lower(cps[next]);
    if (lower_next || (cps[i] == U'.' && next < n && guarded(cps, i))) {
      i = end;
      continue;
    }
    emit(start, end);
    start = i = next;
  }
  emit(start, n);
  return out;
}

}  // namespace belhd
