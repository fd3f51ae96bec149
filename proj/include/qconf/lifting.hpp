#ifndef QCONF_LIFTING_HPP
#define QCONF_LIFTING_HPP

// Lifts a conformance on states to one on monad elements: Egli-Milner for
// subsets, exact optimal transport for distributions, directed Hausdorff for
// (fuzzy) subsets, plus the enumeration-based lift used to validate them.
// Also hosts the one-step behaviour refinement on pairs of machine states.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qconf/conformance.hpp"
#include "qconf/determinize.hpp"
#include "qconf/quantale.hpp"
#include "qconf/system.hpp"

namespace qconf {

// Both-ways simulation of finite subsets under a Boolean relation.
inline bool egli_milner(const Conformance& r, std::uint64_t u, std::uint64_t v) {
  if (r.inst != Instance::boolean)
    throw std::invalid_argument("egli_milner needs a Boolean conformance");
  auto covered = [&](std::uint64_t from, std::uint64_t into, bool flip) {
    for (int x = 0; x < r.n; ++x) {
      if (!(from >> x & 1)) continue;
      bool hit = false;
      for (int y = 0; y < r.n && !hit; ++y)
        if (into >> y & 1) hit = (flip ? r.at(y, x) : r.at(x, y)).as_bool();
      if (!hit) return false;
    }
    return true;
  };
  return covered(u, v, false) && covered(v, u, true);
}

// ---------------------------------------------------------------------------
// Exact optimal transport (transportation simplex over rationals)

namespace detail {

struct Transport {
  int m, n;
  std::vector<Rat> supply, demand;
  std::vector<std::vector<Rat>> cost;

  // Returns the minimal total cost of a coupling. North-west-corner start,
  // potential-based pivots, lowest-index tie-breaking to dodge cycling.
  Rat solve() const {
    std::vector<std::vector<Rat>> flow(m, std::vector<Rat>(n, Rat(0)));
    std::vector<std::vector<bool>> basic(m, std::vector<bool>(n, false));
    {
      std::vector<Rat> s = supply, d = demand;
      int i = 0, j = 0;
      while (true) {
        basic[i][j] = true;
        Rat f = std::min(s[i], d[j]);
        flow[i][j] = f;
        s[i] -= f;
        d[j] -= f;
        if (i == m - 1 && j == n - 1) break;
        if (s[i] == 0 && i < m - 1)
          ++i;
        else
          ++j;
      }
    }

    for (int pivot = 0;; ++pivot) {
      if (pivot > 100000) throw std::logic_error("transport pivot budget exhausted");

      // Potentials u,v with u+v = cost on the basic spanning tree.
      std::vector<std::optional<Rat>> u(m), v(n);
      u[0] = Rat(0);
      for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            if (!basic[i][j]) continue;
            if (u[i] && !v[j]) v[j] = cost[i][j] - *u[i], changed = true;
            if (!u[i] && v[j]) u[i] = cost[i][j] - *v[j], changed = true;
          }
      }

      int ei = -1, ej = -1;
      for (int i = 0; i < m && ei < 0; ++i)
        for (int j = 0; j < n; ++j)
          if (!basic[i][j] && cost[i][j] - *u[i] - *v[j] < 0) {
            ei = i;
            ej = j;
            break;
          }
      if (ei < 0) break;  // optimal

      // Unique cycle: tree path from row ei to column ej, plus the entrant.
      // parent_*[] record the cell through which a node was first reached.
      std::vector<int> parent_row(m, -2), parent_col(n, -2);
      parent_row[ei] = -1;
      std::vector<int> stack{ei};  // rows positive, columns offset by m
      std::vector<bool> row_seen(m, false), col_seen(n, false);
      row_seen[ei] = true;
      while (!stack.empty()) {
        int node = stack.back();
        stack.pop_back();
        if (node < m) {
          for (int j = 0; j < n; ++j)
            if (basic[node][j] && !col_seen[j]) {
              col_seen[j] = true;
              parent_col[j] = node;
              stack.push_back(m + j);
            }
        } else {
          int j = node - m;
          for (int i = 0; i < m; ++i)
            if (basic[i][j] && !row_seen[i]) {
              row_seen[i] = true;
              parent_row[i] = j;
              stack.push_back(i);
            }
        }
      }

      // Walk back from column ej; minus-cells sit at odd positions.
      std::vector<std::pair<int, int>> minus, plus{{ei, ej}};
      int col = ej;
      while (true) {
        int row = parent_col[col];
        minus.emplace_back(row, col);
        if (row == ei) break;
        col = parent_row[row];
        plus.emplace_back(row, col);
      }
      Rat theta = flow[minus[0].first][minus[0].second];
      std::pair<int, int> leaving = minus[0];
      for (const auto& [i, j] : minus)
        if (flow[i][j] < theta) theta = flow[i][j], leaving = std::pair{i, j};
      for (const auto& [i, j] : plus) flow[i][j] += theta;
      for (const auto& [i, j] : minus) flow[i][j] -= theta;
      basic[ei][ej] = true;
      basic[leaving.first][leaving.second] = false;
    }

    Rat total(0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (basic[i][j]) total += flow[i][j] * cost[i][j];
    return total;
  }
};

}  // namespace detail

// Least expected distance over couplings of p and q, read in real terms.
// A termination mark pairs at distance 0 with itself and 1 with any
// distribution.
inline QVal kantorovich(const Conformance& d, const std::optional<DistVec>& p,
                        const std::optional<DistVec>& q) {
  if (d.inst != Instance::interval)
    throw std::invalid_argument("kantorovich needs the interval instance");
  if (!p && !q) return QVal::interval(Rat(0));
  if (!p || !q) return QVal::interval(Rat(1));

  detail::Transport t;
  t.m = static_cast<int>(p->size());
  t.n = static_cast<int>(q->size());
  for (const auto& [x, w] : *p) t.supply.push_back(w);
  for (const auto& [y, w] : *q) t.demand.push_back(w);
  t.cost.assign(t.m, std::vector<Rat>(t.n));
  for (int i = 0; i < t.m; ++i)
    for (int j = 0; j < t.n; ++j) t.cost[i][j] = d.at((*p)[i].first, (*q)[j].first).rat();
  return QVal::interval(t.solve());
}

// Crisp directed Hausdorff: every member of u must find a close member of v.
inline QVal directed_hausdorff(const Conformance& d, std::uint64_t u, std::uint64_t v) {
  Quantale q{d.inst};
  QVal out = q.top();
  for (int x = 0; x < d.n; ++x) {
    if (!(u >> x & 1)) continue;
    QVal best = q.bottom();
    for (int y = 0; y < d.n; ++y)
      if (v >> y & 1) best = q.join(best, d.at(x, y));
    out = q.meet(out, best);
  }
  return out;
}

// Fuzzy directed Hausdorff: membership in u obliges reachability in v.
inline QVal directed_hausdorff(const Conformance& d, const std::vector<Rat>& u,
                               const std::vector<Rat>& v) {
  if (d.inst != Instance::interval)
    throw std::invalid_argument("fuzzy subsets need the interval instance");
  if (static_cast<int>(u.size()) != d.n || static_cast<int>(v.size()) != d.n)
    throw std::invalid_argument("fuzzy subset size mismatch");
  Quantale q{d.inst};
  QVal out = q.top();
  for (int x = 0; x < d.n; ++x) {
    QVal best = q.bottom();
    for (int y = 0; y < d.n; ++y)
      best = q.join(best, q.tensor(QVal::interval(v[y]), d.at(x, y)));
    out = q.meet(out, q.hom(QVal::interval(u[x]), best));
  }
  return out;
}

// Enumeration-based lift on the full powerset carrier (subset masks index the
// result). Unrestricted: image all non-expansive predicates through the
// diamond and reconstruct. Restricted: reconstruct from the join-preserving
// maps that are non-expansive for the unrestricted lift.
inline Conformance kantorovich_definitional_boolean(const Conformance& d,
                                                    bool restrict_to_homomorphisms) {
  if (d.inst != Instance::boolean)
    throw std::invalid_argument("definitional lift is Boolean-only");
  if (d.n > 4) throw std::invalid_argument("definitional lift bound is 4 states");
  Quantale q{d.inst};
  int carrier = 1 << d.n;

  // diamond h on a subset: does some member satisfy h?
  auto diamond = [&](std::uint64_t h_mask) {
    Predicate vals(carrier);
    for (int uu = 0; uu < carrier; ++uu) vals[uu] = QVal::boolean(uu & h_mask);
    return vals;
  };

  std::vector<Predicate> preds;
  if (!restrict_to_homomorphisms) {
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << d.n); ++h) {
      Predicate hp(d.n);
      for (int x = 0; x < d.n; ++x) hp[x] = QVal::boolean(h >> x & 1);
      if (gamma_contains(q, d, hp)) preds.push_back(diamond(h));
    }
    return alpha(q, d.kind, carrier, preds);
  }

  Conformance lifted = kantorovich_definitional_boolean(d, false);
  // Join-preserving maps P(X) -> 2 are exactly the diamonds of arbitrary
  // predicates; keep those non-expansive for the unrestricted lift.
  for (std::uint64_t h = 0; h < (std::uint64_t{1} << d.n); ++h) {
    Predicate k = diamond(h);
    if (gamma_contains(q, lifted, k)) preds.push_back(std::move(k));
  }
  return alpha(q, d.kind, carrier, preds);
}

// ---------------------------------------------------------------------------
// Behaviour refinement on pairs of monad elements

// A conformance over a dynamically discovered carrier of monad elements.
// Pairs never tracked read as top; the diagonal reads as unit.
struct PairTable {
  Instance inst = Instance::boolean;
  TcMode kind = TcMode::symmetric;
  std::vector<MonadElement> elems;
  std::map<MonadElement, int> index;
  std::map<std::pair<int, int>, QVal> val;

  int intern(const MonadElement& e) {
    auto it = index.find(e);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(elems.size());
    index.emplace(e, id);
    elems.push_back(e);
    return id;
  }
  std::pair<int, int> key(int i, int j) const {
    if (kind == TcMode::symmetric && j < i) std::swap(i, j);
    return {i, j};
  }
  bool tracked(int i, int j) const { return val.count(key(i, j)) != 0; }
  QVal at(int i, int j) const {
    if (i == j) return Quantale{inst}.unit();
    auto it = val.find(key(i, j));
    return it == val.end() ? Quantale{inst}.top() : it->second;
  }
  void set(int i, int j, QVal v) { val[key(i, j)] = std::move(v); }

  bool operator==(const PairTable& o) const { return val == o.val && elems == o.elems; }
};

// Which constant observations enter the step. Probabilistic payoffs are part
// of the machine's output and always compared; the emptiness/possibility
// constant on (fuzzy) transition systems can be dropped to see it matter.
struct ThetaSpec {
  bool include_constants = true;
};

// One refinement: each tracked pair is re-evaluated from the previous table
// over its label successors, met with observation distances. Successor pairs
// not yet tracked join the table at top for the next round.
inline PairTable machine_behaviour_step(const System& sys, const PairTable& tab,
                                        ThetaSpec theta = {}) {
  Quantale q{tab.inst};
  PairTable out = tab;
  out.val.clear();
  bool is_pa = std::holds_alternative<ProbAutomaton>(sys);

  std::map<int, DetStep> steps;
  auto step_of = [&](int id) -> const DetStep& {
    auto it = steps.find(id);
    if (it == steps.end()) it = steps.emplace(id, det_step(sys, out.elems[id])).first;
    return it->second;
  };

  std::vector<std::pair<int, int>> frontier;
  for (const auto& [key, ignored] : tab.val) {
    const DetStep& si = step_of(key.first);
    const DetStep& sj = step_of(key.second);
    QVal v = q.top();
    for (std::size_t a = 0; a < si.succ.size(); ++a) {
      int ii = out.intern(si.succ[a]);
      int jj = out.intern(sj.succ[a]);
      v = q.meet(v, tab.at(ii, jj));
      if (ii != jj && !tab.tracked(ii, jj)) frontier.push_back(out.key(ii, jj));
    }
    if (is_pa || theta.include_constants)
      v = q.meet(v, truth_distance(q, tab.kind, si.observation, sj.observation));
    out.val[key] = v;
  }
  for (const auto& p : frontier)
    if (!out.val.count(p)) out.val[p] = q.top();
  return out;
}

// Densifies a fully tracked table into a conformance over its carrier.
inline Conformance table_to_conformance(const PairTable& tab) {
  int n = static_cast<int>(tab.elems.size());
  Conformance d = Conformance::top(tab.inst, tab.kind, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tab.kind == TcMode::directed || i < j) d.set(i, j, tab.at(i, j));
  return d;
}

}  // namespace qconf

#endif  // QCONF_LIFTING_HPP
