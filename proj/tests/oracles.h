#ifndef BELHD_TESTS_ORACLES_H_
#define BELHD_TESTS_ORACLES_H_

// Test-only reference implementations, written directly from the
// definitions and sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "belhd/encoder.h"
#include "belhd/training.h"

namespace belhd::oracle {

// Weighted edit distance by plain recursion on prefixes, memoized per call.
inline std::size_t edit_distance(const std::u32string &a,
                                 const std::u32string &b) {
  std::vector<std::vector<long>> memo(a.size() + 1,
                                      std::vector<long>(b.size() + 1, -1));
  std::function<long(std::size_t, std::size_t)> d = [&](std::size_t i,
                                                         std::size_t j) {
    if (i == 0) return static_cast<long>(j);
    if (j == 0) return static_cast<long>(i);
    long &m = memo[i][j];
    if (m >= 0) return m;
    const long sub = a[i - 1] == b[j - 1] ? 0 : 2;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + sub});
    return m;
  };
  return static_cast<std::size_t>(d(a.size(), b.size()));
}

inline double similarity(const std::u32string &a, const std::u32string &b) {
  if (a.empty() && b.empty()) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) /
                   static_cast<double>(a.size() + b.size());
}

// Row order of an exhaustive scan: inner products summed left to right,
// stable sort by descending score after ordering rows by uid.
inline std::vector<std::size_t> argsort_topk(
    const std::vector<std::vector<double>> &rows,
    const std::vector<std::int64_t> &uids, const std::vector<double> &q,
    std::size_t k) {
  std::vector<double> score(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) s += rows[r][c] * q[c];
    score[r] = s;
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return uids[x] < uids[y]; });
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x,
                                                   std::size_t y) {
    return score[x] > score[y];
  });
  order.resize(std::min(k, order.size()));
  return order;
}

inline std::vector<long double> softmax(const std::vector<long double> &s) {
  long double z = 0.0L;
  for (long double x : s) z += std::exp(x);
  std::vector<long double> p;
  for (long double x : s) p.push_back(std::exp(x) / z);
  return p;
}

// Mean marginal loss over examples as a function of the dense weights,
// evaluated in long double.
inline long double mean_loss(const std::vector<double> &weights,
                             std::uint32_t p,
                             const std::vector<TrainExample> &batch) {
  auto embed = [&](const FeatureVector &fv) {
    std::vector<long double> e(p, 0.0L);
    for (std::size_t t = 0; t < fv.indices.size(); ++t) {
      for (std::uint32_t c = 0; c < p; ++c) {
        e[c] += static_cast<long double>(fv.values[t]) *
                weights[std::size_t{fv.indices[t]} * p + c];
      }
    }
    return e;
  };
  long double total = 0.0L;
  std::size_t used = 0;
  for (const TrainExample &ex : batch) {
    if (std::none_of(ex.positive.begin(), ex.positive.end(),
                     [](char c) { return c != 0; })) {
      continue;
    }
    const auto m = embed(ex.mention);
    std::vector<long double> scores;
    for (const FeatureVector *c : ex.candidates) {
      const auto e = embed(*c);
      long double s = 0.0L;
      for (std::uint32_t i = 0; i < p; ++i) s += m[i] * e[i];
      scores.push_back(s);
    }
    const auto prob = softmax(scores);
    long double pos = 0.0L;
    for (std::size_t i = 0; i < prob.size(); ++i) {
      if (ex.positive[i]) pos += prob[i];
    }
    total -= std::log(pos);
    ++used;
  }
  return used == 0 ? 0.0L : total / static_cast<long double>(used);
}

// Character n-grams of the padded lowercase ASCII text, as strings.
inline std::set<std::string> ngrams(const std::string &ascii_lower,
                                    std::size_t min_n, std::size_t max_n) {
  const std::string padded = "\x02" + ascii_lower + "\x03";
  std::set<std::string> grams;
  for (std::size_t n = min_n; n <= max_n; ++n) {
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      grams.insert(padded.substr(i, n));
    }
  }
  return grams;
}

inline std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace belhd::oracle

#endif  // BELHD_TESTS_ORACLES_H_
