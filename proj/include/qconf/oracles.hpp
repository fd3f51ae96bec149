#ifndef QCONF_ORACLES_HPP
#define QCONF_ORACLES_HPP

// Reference predictions computed straight from the concrete definitions:
// dense vector-matrix products, path enumeration, and a memoized language
// comparison. Nothing here touches the determinization or fixpoint engines,
// so these can sit on the other side of a cross-check.

#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "qconf/rational.hpp"
#include "qconf/system.hpp"

namespace qconf {

// Expected payoff after reading `word` from the start distribution.
inline Rat word_payoff_oracle(const ProbAutomaton& pa, const DistVec& start, const Word& word) {
  int n = static_cast<int>(pa.states.size());
  std::vector<Rat> v(n, Rat(0));
  for (const auto& [i, w] : start) v.at(i) = w;
  for (int a : word) {
    std::vector<Rat> next(n, Rat(0));
    for (int x = 0; x < n; ++x) {
      if (v[x] == 0) continue;
      for (const auto& [y, p] : pa.trans[x].at(a)) next[y] += v[x] * p;
    }
    v = std::move(next);
  }
  Rat out(0);
  for (int x = 0; x < n; ++x) out += v[x] * pa.payoff[x];
  return out;
}

// All words of length <= maxlen labelling a path that starts in `start`.
// The empty word belongs to every nonempty start set.
inline std::set<Word> trace_set_oracle(const Lts& lts, std::uint64_t start, int maxlen) {
  std::set<Word> traces;
  int n = static_cast<int>(lts.states.size());
  int k = static_cast<int>(lts.alphabet.size());
  Word word;
  auto dfs = [&](auto&& self, int x) -> void {
    traces.insert(word);
    if (static_cast<int>(word.size()) == maxlen) return;
    for (int a = 0; a < k; ++a)
      for (int y = 0; y < n; ++y)
        if (lts.succ[x][a] >> y & 1) {
          word.push_back(a);
          self(self, y);
          word.pop_back();
        }
  };
  for (int x = 0; x < n; ++x)
    if (start >> x & 1) dfs(dfs, x);
  return traces;
}

// Value of a word for a fuzzy start set: the best (tensor-cheapest) path,
// truncated addition of edge weights on top of the entry value.
inline Rat fuzzy_trace_value_oracle(const FuzzyLts& fl, const std::vector<Rat>& start,
                                    const Word& word) {
  int n = static_cast<int>(fl.states.size());
  std::vector<Rat> cost = start;  // cost-to-reach after a prefix
  for (int a : word) {
    std::vector<Rat> next(n, Rat(1));
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        Rat c = cost[x] + fl.weight[x].at(a)[y];
        if (c > 1) c = 1;
        if (c < next[y]) next[y] = c;
      }
    cost = std::move(next);
  }
  Rat best(1);
  for (int x = 0; x < n; ++x)
    if (cost[x] < best) best = cost[x];
  return best;
}

// Do two start sets admit exactly the same words of length <= maxlen?
// Recurses on label-successor sets with memoization; depth matters, so the
// memo key includes the remaining budget.
inline bool trace_sets_equal_bounded(const Lts& lts, std::uint64_t a_set, std::uint64_t b_set,
                                     int maxlen) {
  if (maxlen < 0) return true;  // no words to compare
  int n = static_cast<int>(lts.states.size());
  int k = static_cast<int>(lts.alphabet.size());
  auto step = [&](std::uint64_t u, int a) {
    std::uint64_t out = 0;
    for (int x = 0; x < n; ++x)
      if (u >> x & 1) out |= lts.succ[x][a];
    return out;
  };
  std::map<std::tuple<std::uint64_t, std::uint64_t, int>, bool> memo;
  auto eq = [&](auto&& self, std::uint64_t u, std::uint64_t v, int budget) -> bool {
    if ((u == 0) != (v == 0)) return false;
    if (budget == 0 || u == v) return true;
    auto key = std::make_tuple(u, v, budget);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool same = true;
    for (int a = 0; a < k && same; ++a) same = self(self, step(u, a), step(v, a), budget - 1);
    memo[key] = same;
    return same;
  };
  return eq(eq, a_set, b_set, maxlen);
}

}  // namespace qconf

#endif  // QCONF_ORACLES_HPP
