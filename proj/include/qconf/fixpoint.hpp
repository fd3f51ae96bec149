#ifndef QCONF_FIXPOINT_HPP
#define QCONF_FIXPOINT_HPP

// Iteration engines: generic greatest-fixpoint iteration on conformances,
// partition refinement for the Boolean equivalence cases, and the bounded
// pair-graph drivers for quantitative comparisons.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qconf/conformance.hpp"
#include "qconf/determinize.hpp"
#include "qconf/lifting.hpp"
#include "qconf/system.hpp"

namespace qconf {

struct FixpointReport {
  bool converged = false;
  bool exact = true;
  int iterations = 0;
  std::string order = "greatest";  // which end the chain started from
  std::optional<Conformance> matrix;
  std::optional<QVal> value;
};

inline Json report_to_json(const FixpointReport& r) {
  Json doc;
  doc["converged"] = r.converged;
  doc["exact"] = r.exact;
  doc["iterations"] = r.iterations;
  doc["order"] = r.order;
  if (r.value) doc["value"] = r.value->str();
  if (r.matrix) doc["matrix"] = conformance_to_json(*r.matrix);
  return doc;
}

// Iterates step from `start` until two consecutive iterates are identical
// (exact rational equality) or the budget runs out. The chain must descend in
// the conformance order; a violation means the step is not monotone.
inline FixpointReport gfp_iterate(const std::function<Conformance(const Conformance&)>& step,
                                  Conformance start, int max_iters) {
  Quantale q{start.inst};
  FixpointReport rep;
  Conformance cur = std::move(start);
  for (int i = 0; i < max_iters; ++i) {
    Conformance next = step(cur);
    if (!conf_leq(q, next, cur)) throw std::logic_error("fixpoint chain failed to descend");
    rep.iterations = i + 1;
    if (next == cur) {
      rep.converged = true;
      rep.matrix = std::move(next);
      return rep;
    }
    cur = std::move(next);
  }
  rep.converged = false;
  rep.exact = false;
  rep.matrix = std::move(cur);
  return rep;
}

namespace detail {

// Per-state successor masks, one row per label; unlabelled systems get a
// single pseudo-label.
inline std::vector<std::vector<std::uint64_t>> successor_rows(const System& sys) {
  if (const auto* l = std::get_if<Lts>(&sys)) return l->succ;
  if (const auto* u = std::get_if<UnlabelledTs>(&sys)) {
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::uint64_t bits : u->succ) rows.push_back({bits});
    return rows;
  }
  throw std::invalid_argument("expected a (un)labelled transition system");
}

}  // namespace detail

// One refinement of a Boolean state conformance by both-ways simulation of
// successor sets, per label.
inline Conformance egli_milner_step(const System& sys, const Conformance& r) {
  auto rows = detail::successor_rows(sys);
  int n = r.n;
  Conformance out = Conformance::top(r.inst, r.kind, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      bool ok = true;
      for (std::size_t a = 0; a < rows[x].size() && ok; ++a)
        ok = egli_milner(r, rows[x][a], rows[y][a]);
      out.set(x, y, QVal::boolean(ok));
    }
  return out;
}

inline FixpointReport bisimilarity_em_gfp(const System& sys, int max_iters = 1 << 10) {
  int n = n_states(sys);
  auto step = [&sys](const Conformance& r) { return egli_milner_step(sys, r); };
  return gfp_iterate(step, Conformance::top(Instance::boolean, TcMode::symmetric, n), max_iters);
}

// Coarsest bisimulation by signature-based partition refinement.
inline Conformance bisimilarity(const System& sys) {
  auto rows = detail::successor_rows(sys);
  int n = n_states(sys);
  std::vector<int> block(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    // signature: which blocks are hit per label
    std::map<std::pair<int, std::vector<std::set<int>>>, int> renumber;
    std::vector<int> next(n);
    for (int x = 0; x < n; ++x) {
      std::vector<std::set<int>> sig;
      for (std::uint64_t bits : rows[x]) {
        std::set<int> hit;
        for (int y = 0; y < n; ++y)
          if (bits >> y & 1) hit.insert(block[y]);
        sig.push_back(std::move(hit));
      }
      auto key = std::make_pair(block[x], std::move(sig));
      auto it = renumber.find(key);
      if (it == renumber.end()) it = renumber.emplace(key, static_cast<int>(renumber.size())).first;
      next[x] = it->second;
    }
    if (next != block) changed = true;
    block = std::move(next);
  }
  Conformance out = Conformance::top(Instance::boolean, TcMode::symmetric, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) out.set(x, y, QVal::boolean(block[x] == block[y]));
  return out;
}

// ---------------------------------------------------------------------------
// Trace equivalence on the reachable subset automaton

struct TraceEqResult {
  bool equivalent = true;
  Word witness;     // shortest distinguishing word when inequivalent
  int left_nodes = 0, right_nodes = 0;  // reachable determinized sizes
};

inline TraceEqResult trace_equivalence(const System& sys, std::uint64_t u, std::uint64_t v) {
  if (!std::holds_alternative<Lts>(sys))
    throw std::invalid_argument("trace equivalence expects a labelled transition system");
  ClosureGraph g = reachable_closure(sys, {subset_element(u), subset_element(v)});
  int k = static_cast<int>(alphabet_of(sys).size());
  int iu = g.id_of(subset_element(u));
  int iv = g.id_of(subset_element(v));

  auto reach_count = [&](int from) {
    std::set<int> seen{from};
    std::deque<int> q{from};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int a = 0; a < k; ++a)
        if (seen.insert(g.succ[x][a]).second) q.push_back(g.succ[x][a]);
    }
    return static_cast<int>(seen.size());
  };

  // partition refinement seeded by the emptiness observation; block ids are
  // kept first-occurrence-canonical so a stable partition maps to itself
  int m = static_cast<int>(g.nodes.size());
  std::vector<int> block(m);
  for (int x = 0; x < m; ++x) block[x] = g.obs[x] == g.obs[0] ? 0 : 1;
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::vector<int>, int> renumber;
    std::vector<int> next(m);
    for (int x = 0; x < m; ++x) {
      std::vector<int> sig{block[x]};
      for (int a = 0; a < k; ++a) sig.push_back(block[g.succ[x][a]]);
      auto it = renumber.find(sig);
      if (it == renumber.end()) it = renumber.emplace(sig, static_cast<int>(renumber.size())).first;
      next[x] = it->second;
    }
    if (next != block) changed = true;
    block = std::move(next);
  }

  TraceEqResult res;
  res.left_nodes = reach_count(iu);
  res.right_nodes = reach_count(iv);
  res.equivalent = block[iu] == block[iv];
  if (res.equivalent) return res;

  // shortest witness: breadth-first over node pairs, labels in declared order
  struct Visit {
    int i, j, parent, label;
  };
  std::vector<Visit> trail{{iu, iv, -1, -1}};
  std::set<std::pair<int, int>> seen{{iu, iv}};
  for (std::size_t head = 0; head < trail.size(); ++head) {
    auto [i, j, parent, label] = trail[head];
    if (g.obs[i] != g.obs[j]) {
      Word w;
      for (int at = static_cast<int>(head); trail[at].parent >= 0; at = trail[at].parent)
        w.push_back(trail[at].label);
      res.witness.assign(w.rbegin(), w.rend());
      return res;
    }
    for (int a = 0; a < k; ++a) {
      std::pair<int, int> np{g.succ[i][a], g.succ[j][a]};
      if (seen.insert(np).second)
        trail.push_back({np.first, np.second, static_cast<int>(head), a});
    }
  }
  throw std::logic_error("refinement split the seeds but no witness was found");
}

// ---------------------------------------------------------------------------
// Quantitative pair-graph iteration

// Greatest fixpoint of the behaviour step, restricted to pairs reachable from
// the query pair. `depth` bounds the number of refinement rounds, which also
// bounds how far the pair graph unfolds.
inline FixpointReport trace_distance(const System& sys, const MonadElement& t1,
                                     const MonadElement& t2, int depth,
                                     ThetaSpec theta = {}) {
  PairTable tab;
  tab.inst = Instance::interval;
  tab.kind = std::holds_alternative<ProbAutomaton>(sys) ? TcMode::symmetric : TcMode::directed;
  QVal top = Quantale{tab.inst}.top();
  int i = tab.intern(t1);
  int j = tab.intern(t2);
  tab.set(i, j, top);

  // Materialize the pair graph out to the iteration horizon up front;
  // otherwise pairs discovered in round r would sit untouched at top until
  // round r+1 and the seed's n-th value would lag the true n-th iterate.
  std::deque<std::pair<std::pair<int, int>, int>> frontier{{tab.key(i, j), 0}};
  std::map<MonadElement, DetStep> step_memo;
  auto step_of = [&](const MonadElement& e) -> const DetStep& {
    auto it = step_memo.find(e);
    if (it == step_memo.end()) it = step_memo.emplace(e, det_step(sys, e)).first;
    return it->second;
  };
  while (!frontier.empty()) {
    auto [key, dist] = frontier.front();
    frontier.pop_front();
    if (dist >= depth) continue;
    const DetStep& s1 = step_of(tab.elems[key.first]);
    const DetStep& s2 = step_of(tab.elems[key.second]);
    for (std::size_t a = 0; a < s1.succ.size(); ++a) {
      int ii = tab.intern(s1.succ[a]);
      int jj = tab.intern(s2.succ[a]);
      if (ii == jj || tab.tracked(ii, jj)) continue;
      tab.set(ii, jj, top);
      frontier.push_back({tab.key(ii, jj), dist + 1});
    }
  }

  FixpointReport rep;
  for (int n = 0; n < depth; ++n) {
    PairTable next = machine_behaviour_step(sys, tab, theta);
    rep.iterations = n + 1;
    if (next == tab) {
      rep.converged = true;
      break;
    }
    tab = std::move(next);
  }
  rep.exact = rep.converged;
  rep.value = tab.at(i, j);
  return rep;
}

// Least fixpoint (in the real reading) of the transport step on a Markov
// chain with termination, from the all-zero matrix.
inline FixpointReport bisim_metric(const System& sys, int iters) {
  const auto* mt = std::get_if<MarkovTerm>(&sys);
  if (!mt) throw std::invalid_argument("bisim_metric expects a markov-term system");
  int n = static_cast<int>(mt->states.size());
  auto to_opt = [&](int x) -> std::optional<DistVec> {
    if (!mt->step[x]) return std::nullopt;
    return *mt->step[x];
  };
  auto step = [&](const Conformance& d) {
    Conformance out = Conformance::top(Instance::interval, TcMode::symmetric, n);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) out.set(x, y, kantorovich(d, to_opt(x), to_opt(y)));
    return out;
  };
  FixpointReport rep =
      gfp_iterate(step, Conformance::top(Instance::interval, TcMode::symmetric, n), iters);
  rep.order = "least";  // all-zero start read in the usual order on [0,1]
  rep.exact = rep.converged;
  return rep;
}

// Directed simulation distance on states: greatest fixpoint of the directed
// Hausdorff lifting of the successor structure. Boolean on unlabelled
// systems (plain similarity), interval-valued on fuzzy ones.
inline FixpointReport sim_metric_directed(const System& sys, int iters) {
  if (const auto* u = std::get_if<UnlabelledTs>(&sys)) {
    int n = static_cast<int>(u->states.size());
    auto step = [&, n](const Conformance& d) {
      Conformance out = Conformance::top(Instance::boolean, TcMode::directed, n);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (x != y) out.set(x, y, directed_hausdorff(d, u->succ[x], u->succ[y]));
      return out;
    };
    return gfp_iterate(step, Conformance::top(Instance::boolean, TcMode::directed, n), iters);
  }
  if (const auto* fl = std::get_if<FuzzyLts>(&sys)) {
    int n = static_cast<int>(fl->states.size());
    int k = static_cast<int>(fl->alphabet.size());
    Quantale q{Instance::interval};
    auto step = [&, n, k](const Conformance& d) {
      Conformance out = Conformance::top(Instance::interval, TcMode::directed, n);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (x == y) continue;
          QVal v = q.top();
          for (int a = 0; a < k; ++a)
            v = q.meet(v, directed_hausdorff(d, fl->weight[x][a], fl->weight[y][a]));
          out.set(x, y, v);
        }
      return out;
    };
    return gfp_iterate(step, Conformance::top(Instance::interval, TcMode::directed, n), iters);
  }
  throw std::invalid_argument("directed metric expects an unlabelled or fuzzy system");
}

}  // namespace qconf

#endif  // QCONF_FIXPOINT_HPP
