#ifndef QCONF_DETERMINIZE_HPP
#define QCONF_DETERMINIZE_HPP

// Powerset-style determinization: one deterministic step on monad elements,
// and the finite unfolding of the induced machine into a node graph.

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "qconf/quantale.hpp"
#include "qconf/system.hpp"

namespace qconf {

inline Rat expected_payoff(const ProbAutomaton& pa, const DistVec& d) {
  Rat out(0);
  for (const auto& [x, w] : d) out += w * pa.payoff.at(x);
  return out;
}

inline Rat fuzzy_min(const std::vector<Rat>& memb) {
  Rat out(1);
  for (const Rat& v : memb)
    if (v < out) out = v;
  return out;
}

// One transposed step: all label successors of t plus t's observation.
// Observations: subsets report nonemptiness (Boolean), distributions report
// the expected payoff, fuzzy subsets their strongest membership.
struct DetStep {
  MonadElement input;
  std::vector<MonadElement> succ;  // indexed by label
  QVal observation;
};

inline DetStep det_step(const System& sys, const MonadElement& t) {
  if (t.kind != monad_of(sys)) throw std::invalid_argument("element does not match system monad");
  DetStep out;
  out.input = t;

  if (const auto* l = std::get_if<Lts>(&sys)) {
    int n = static_cast<int>(l->states.size());
    for (std::size_t a = 0; a < l->alphabet.size(); ++a) {
      std::uint64_t u = 0;
      for (int x = 0; x < n; ++x)
        if (t.bits >> x & 1) u |= l->succ[x][a];
      out.succ.push_back(subset_element(u));
    }
    out.observation = QVal::boolean(t.bits != 0);
    return out;
  }

  if (const auto* p = std::get_if<ProbAutomaton>(&sys)) {
    int n = static_cast<int>(p->states.size());
    for (std::size_t a = 0; a < p->alphabet.size(); ++a) {
      std::vector<Rat> next(n, Rat(0));
      for (const auto& [x, w] : t.weights)
        for (const auto& [y, q] : p->trans[x][a]) next[y] += w * q;
      DistVec entries;
      for (int y = 0; y < n; ++y)
        if (next[y] != 0) entries.emplace_back(y, next[y]);
      out.succ.push_back(dist_element(std::move(entries)));
    }
    out.observation = QVal::interval(expected_payoff(*p, t.weights));
    return out;
  }

  const auto& f = std::get<FuzzyLts>(sys);
  int n = static_cast<int>(f.states.size());
  for (std::size_t a = 0; a < f.alphabet.size(); ++a) {
    std::vector<Rat> next(n, Rat(1));
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        Rat c = t.memb[x] + f.weight[x][a][y];  // tensor = truncated addition
        if (c > 1) c = 1;
        if (c < next[y]) next[y] = c;  // join = minimum
      }
    out.succ.push_back(fuzzy_element(std::move(next)));
  }
  out.observation = QVal::interval(fuzzy_min(t.memb));
  return out;
}

// Finite BFS unfolding. `exact` is true iff every discovered node was
// expanded, i.e. the closure saturated within the caps; subsets always
// saturate, distributions and fuzzy sets may not.
struct ClosureGraph {
  std::vector<MonadElement> nodes;
  std::map<MonadElement, int> index;
  std::vector<std::vector<int>> succ;  // [node][label] -> node id, -1 if unexpanded
  std::vector<QVal> obs;
  std::vector<int> depth;
  bool exact = true;

  int id_of(const MonadElement& e) const {
    auto it = index.find(e);
    return it == index.end() ? -1 : it->second;
  }
};

inline constexpr int kDefaultDepthCap = 64;

inline ClosureGraph reachable_closure(const System& sys, const std::vector<MonadElement>& seeds,
                                      int depth_cap = kDefaultDepthCap,
                                      int node_budget = 1 << 17) {
  int k = static_cast<int>(alphabet_of(sys).size());
  ClosureGraph g;
  std::deque<int> queue;
  auto intern = [&](const MonadElement& e, int d) -> int {
    auto it = g.index.find(e);
    if (it != g.index.end()) return it->second;
    int id = static_cast<int>(g.nodes.size());
    g.index.emplace(e, id);
    g.nodes.push_back(e);
    g.succ.emplace_back(k, -1);
    g.obs.push_back(QVal());
    g.depth.push_back(d);
    queue.push_back(id);
    return id;
  };
  for (const MonadElement& s : seeds) intern(s, 0);

  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    DetStep step = det_step(sys, g.nodes[id]);
    g.obs[id] = step.observation;
    if (g.depth[id] >= depth_cap || static_cast<int>(g.nodes.size()) > node_budget) {
      if (k > 0) g.exact = false;  // left unexpanded
      continue;
    }
    for (int a = 0; a < k; ++a) g.succ[id][a] = intern(step.succ[a], g.depth[id] + 1);
  }
  return g;
}

// Debug edge list: "# id element" legend, then "src label dst obs-of-src".
inline std::string closure_dump(const System& sys, const ClosureGraph& g) {
  auto sigma = alphabet_of(sys);
  std::string out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out += "# " + std::to_string(i) + " " + element_str(sys, g.nodes[i]) + "\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t a = 0; a < g.succ[i].size(); ++a)
      if (g.succ[i][a] >= 0)
        out += std::to_string(i) + " " + sigma[a] + " " + std::to_string(g.succ[i][a]) + " " +
               g.obs[i].str() + "\n";
  return out;
}

}  // namespace qconf

#endif  // QCONF_DETERMINIZE_HPP
