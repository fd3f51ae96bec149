#ifndef QCONF_CONFORMANCE_HPP
#define QCONF_CONFORMANCE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qconf/quantale.hpp"

namespace qconf {

using Predicate = std::vector<QVal>;  // a map X -> Omega

// A finite conformance: n x n matrix of quantale values, directed or
// symmetric. Valid instances satisfy d(i,i) = unit and the triangle law
// d(i,j) (x) d(j,k) <= d(i,k) in the quantale order.
struct Conformance {
  Instance inst;
  TcMode kind;
  int n = 0;
  std::vector<QVal> cells;

  Conformance(Instance in, TcMode k, int size, QVal fill)
      : inst(in), kind(k), n(size), cells(static_cast<std::size_t>(size) * size, fill) {}

  static Conformance top(Instance in, TcMode k, int size) {
    return Conformance(in, k, size, Quantale(in).unit());
  }

  const QVal& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
  QVal& at(int i, int j) { return cells[static_cast<std::size_t>(i) * n + j]; }

  void set(int i, int j, const QVal& v) {
    at(i, j) = v;
    if (kind == TcMode::symmetric) at(j, i) = v;
  }

  bool operator==(const Conformance& o) const {
    return inst == o.inst && kind == o.kind && n == o.n && cells == o.cells;
  }
};

// alpha(S) = /\_{h in S} h*(d_Omega): the finest conformance of the given
// mode making every predicate in S non-expansive. Empty S gives the all-unit
// (top) conformance.
inline Conformance alpha(const Quantale& q, TcMode mode, int n,
                         const std::vector<Predicate>& S) {
  for (const Predicate& h : S)
    if (static_cast<int>(h.size()) != n)
      throw std::invalid_argument("alpha: predicate size mismatch");
  Conformance d = Conformance::top(q.inst, mode, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      QVal acc = q.top();
      for (const Predicate& h : S) acc = q.meet(acc, truth_distance(q, mode, h[i], h[j]));
      d.at(i, j) = acc;
    }
  return d;
}

// Membership test for gamma(d) = { h | d <= h*(d_Omega) }: h is non-expansive
// with respect to d. gamma itself is never materialized.
inline bool gamma_contains(const Quantale& q, const Conformance& d, const Predicate& h) {
  if (static_cast<int>(h.size()) != d.n)
    throw std::invalid_argument("gamma_contains: predicate size mismatch");
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (!q.leq(d.at(i, j), truth_distance(q, d.kind, h[i], h[j]))) return false;
  return true;
}

// The predicate x |-> d(y, x); non-expansive by construction, and for the
// integral instances truth_distance(row(y), row(x)) recovers d(y, x).
inline Predicate distance_row(const Conformance& d, int y) {
  if (y < 0 || y >= d.n) throw std::out_of_range("distance_row: index out of range");
  Predicate h;
  h.reserve(d.n);
  for (int x = 0; x < d.n; ++x) h.push_back(d.at(y, x));
  return h;
}

// Pullback along f: X -> Y. d'(i,j) = d(f(i), f(j)).
inline Conformance reindex(const std::vector<int>& f, const Conformance& d) {
  int m = static_cast<int>(f.size());
  Conformance out(d.inst, d.kind, m, Quantale(d.inst).unit());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (f[i] < 0 || f[i] >= d.n || f[j] < 0 || f[j] >= d.n)
        throw std::out_of_range("reindex: map target out of range");
      out.at(i, j) = d.at(f[i], f[j]);
    }
  return out;
}

inline Conformance conf_meet(const Quantale& q, const Conformance& a, const Conformance& b) {
  if (a.n != b.n || a.kind != b.kind || a.inst != b.inst)
    throw std::invalid_argument("conformance meet: shape mismatch");
  Conformance out = a;
  for (std::size_t i = 0; i < out.cells.size(); ++i)
    out.cells[i] = q.meet(a.cells[i], b.cells[i]);
  return out;
}

inline bool conf_leq(const Quantale& q, const Conformance& a, const Conformance& b) {
  if (a.n != b.n || a.kind != b.kind || a.inst != b.inst)
    throw std::invalid_argument("conformance leq: shape mismatch");
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    if (!q.leq(a.cells[i], b.cells[i])) return false;
  return true;
}

// Pseudometric axioms of the conformance's own kind.
inline bool is_valid_conformance(const Quantale& q, const Conformance& d) {
  for (int i = 0; i < d.n; ++i)
    if (!(d.at(i, i) == q.unit())) return false;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) {
      if (d.kind == TcMode::symmetric && !(d.at(i, j) == d.at(j, i))) return false;
      for (int k = 0; k < d.n; ++k)
        if (!q.leq(q.tensor(d.at(i, j), d.at(j, k)), d.at(i, k))) return false;
    }
  return true;
}

inline constexpr int kEnumerationBound = 12;

// Enumerates all 2^n Boolean predicates, keeps the non-expansive ones, and
// applies alpha: computes alpha(gamma(d)). For every valid Boolean
// conformance this returns d itself (the co-closure identity).
inline Conformance coclosure_boolean(const Conformance& d) {
  if (d.inst != Instance::boolean)
    throw std::invalid_argument("coclosure enumeration requires the boolean instance");
  if (d.n > kEnumerationBound)
    throw std::invalid_argument("coclosure refused: n = " + std::to_string(d.n) +
                                " exceeds the enumeration bound " +
                                std::to_string(kEnumerationBound));
  Quantale q(Instance::boolean);
  std::vector<Predicate> kept;
  for (std::uint32_t mask = 0; mask < (1u << d.n); ++mask) {
    Predicate h(d.n, QVal::boolean(false));
    for (int i = 0; i < d.n; ++i) h[i] = QVal::boolean((mask >> i) & 1);
    if (gamma_contains(q, d, h)) kept.push_back(std::move(h));
  }
  return alpha(q, d.kind, d.n, kept);
}

inline nlohmann::json conformance_to_json(const Conformance& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < d.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < d.n; ++j) row.push_back(d.at(i, j).str());
    entries.push_back(std::move(row));
  }
  return {{"kind", d.kind == TcMode::symmetric ? "symmetric" : "directed"},
          {"instance", d.inst == Instance::boolean ? "boolean" : "interval"},
          {"entries", std::move(entries)}};
}

}  // namespace qconf

#endif  // QCONF_CONFORMANCE_HPP
