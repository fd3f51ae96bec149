#ifndef QCONF_CHECKS_HPP
#define QCONF_CHECKS_HPP

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qconf/conformance.hpp"
#include "qconf/quantale.hpp"

namespace qconf {

struct SelfTestResult {
  bool ok = true;
  long checks = 0;
  std::string log;

  void fail(const std::string& line) {
    ok = false;
    log += line;
    log += '\n';
  }
};

inline Rat random_unit_rational(std::mt19937_64& rng, int max_den = 12) {
  std::uint64_t den = 1 + rng() % static_cast<std::uint64_t>(max_den);
  std::uint64_t num = rng() % (den + 1);
  return Rat(BigInt(num), BigInt(den));
}

inline QVal random_qval(const Quantale& q, std::mt19937_64& rng) {
  if (q.inst == Instance::boolean) return QVal::boolean(rng() % 2 == 1);
  return QVal::interval(random_unit_rational(rng));
}

// Law battery for one quantale instance: adjunction, distributivity over
// finite joins, monoid laws, lattice laws, integrality, and the two
// internal-hom unit identities. Exhaustive over Boolean triples, randomized
// over interval rationals.
inline SelfTestResult quantale_selftest(Instance inst, long samples, unsigned seed) {
  SelfTestResult r;
  Quantale q(inst);
  std::mt19937_64 rng(seed);

  std::vector<std::vector<QVal>> triples;
  if (inst == Instance::boolean) {
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
          triples.push_back({QVal::boolean(x), QVal::boolean(y), QVal::boolean(z)});
  } else {
    for (long i = 0; i < samples; ++i)
      triples.push_back({random_qval(q, rng), random_qval(q, rng), random_qval(q, rng)});
  }

  if (!(q.unit() == q.top())) r.fail("integrality: unit != top");
  ++r.checks;

  for (const auto& t : triples) {
    const QVal &x = t[0], &y = t[1], &z = t[2];
    if (q.leq(q.tensor(x, y), z) != q.leq(x, q.hom(y, z)))
      r.fail("adjunction fails at (" + x.str() + "," + y.str() + "," + z.str() + ")");
    if (!(q.tensor(x, y) == q.tensor(y, x))) r.fail("tensor not commutative");
    if (!(q.tensor(q.tensor(x, y), z) == q.tensor(x, q.tensor(y, z))))
      r.fail("tensor not associative");
    if (!(q.tensor(x, q.unit()) == x)) r.fail("unit law fails at " + x.str());
    if (!(q.hom(q.unit(), z) == z)) r.fail("hom(unit, z) != z at " + z.str());
    if (!(q.hom(z, q.unit()) == q.unit())) r.fail("hom(z, unit) != unit at " + z.str());
    // distributivity of tensor over the (finite) join of {y, z}
    QVal lhs = q.tensor(x, q.join(y, z));
    QVal rhs = q.join(q.tensor(x, y), q.tensor(x, z));
    if (!(lhs == rhs)) r.fail("tensor does not distribute over join");
    if (!(q.join(x, x) == x) || !(q.meet(x, x) == x)) r.fail("lattice idempotence fails");
    if (!(q.join(x, y) == q.join(y, x)) || !(q.meet(x, y) == q.meet(y, x)))
      r.fail("lattice commutativity fails");
    if (!q.leq(q.bottom(), x) || !q.leq(x, q.top())) r.fail("bounds violated");
    r.checks += 9;
    if (!r.ok) break;
  }
  if (!(q.meet_all({}) == q.top()) || !(q.join_all({}) == q.bottom()))
    r.fail("empty meet/join must be top/bottom");
  ++r.checks;
  return r;
}

// All set partitions of {0..n-1} as block-id vectors (restricted growth
// strings); block ids are dense and appear in first-occurrence order.
inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> blocks(n, 0);
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == n) {
      out.push_back(blocks);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      blocks[i] = b;
      self(self, i + 1, b == used ? used + 1 : used);
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(rec, 0, 0);
  return out;
}

inline Conformance equivalence_from_blocks(const std::vector<int>& blocks) {
  int n = static_cast<int>(blocks.size());
  Conformance d(Instance::boolean, TcMode::symmetric, n, QVal::boolean(false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.at(i, j) = QVal::boolean(blocks[i] == blocks[j]);
  return d;
}

inline Predicate random_predicate(const Quantale& q, int n, std::mt19937_64& rng) {
  Predicate h;
  h.reserve(n);
  for (int i = 0; i < n; ++i) h.push_back(random_qval(q, rng));
  return h;
}

// Arbitrary (not necessarily valid) conformance matrix with unit diagonal.
inline Conformance random_matrix(const Quantale& q, TcMode mode, int n, std::mt19937_64& rng) {
  Conformance d(q.inst, mode, n, q.unit());
  for (int i = 0; i < n; ++i)
    for (int j = (mode == TcMode::symmetric ? i + 1 : 0); j < n; ++j) {
      if (i == j) continue;
      d.set(i, j, random_qval(q, rng));
      if (mode == TcMode::directed && rng() % 4 == 0) d.at(j, i) = random_qval(q, rng);
    }
  return d;
}

// Galois-connection battery: the adjunction law on random (S, d) pairs,
// validity of every alpha output, antitonicity of alpha, the distance-row
// lemma, and the Boolean co-closure identity on every equivalence with
// n <= coclosure_max_n.
inline SelfTestResult conformance_selftest(long pairs, int coclosure_max_n, unsigned seed) {
  SelfTestResult r;
  std::mt19937_64 rng(seed);

  for (long it = 0; it < pairs && r.ok; ++it) {
    Quantale q(it % 2 == 0 ? Instance::boolean : Instance::interval);
    TcMode mode = (it % 4 < 2) ? TcMode::symmetric : TcMode::directed;
    int n = 1 + static_cast<int>(rng() % 5);
    std::vector<Predicate> S;
    for (std::uint64_t k = rng() % 4; k > 0; --k) S.push_back(random_predicate(q, n, rng));

    Conformance a = alpha(q, mode, n, S);
    if (!is_valid_conformance(q, a)) r.fail("alpha output violates pseudometric axioms");

    Conformance d = random_matrix(q, mode, n, rng);
    bool lhs = conf_leq(q, d, a);
    bool rhs = true;
    for (const Predicate& h : S) rhs = rhs && gamma_contains(q, d, h);
    if (lhs != rhs) r.fail("Galois law fails: d <= alpha(S) vs S <= gamma(d)");

    // antitone: alpha over a superset is finer
    std::vector<Predicate> S2 = S;
    S2.push_back(random_predicate(q, n, rng));
    if (!conf_leq(q, alpha(q, mode, n, S2), a)) r.fail("alpha not antitone");

    // distance rows of a valid conformance are non-expansive
    for (int y = 0; y < n; ++y)
      if (!gamma_contains(q, a, distance_row(a, y))) r.fail("distance_row not non-expansive");

    r.checks += 3 + n;
  }

  for (int n = 1; n <= coclosure_max_n && r.ok; ++n) {
    for (const auto& blocks : all_partitions(n)) {
      Conformance d = equivalence_from_blocks(blocks);
      if (!(coclosure_boolean(d) == d)) {
        r.fail("co-closure identity fails on an equivalence with n = " + std::to_string(n));
        break;
      }
      ++r.checks;
    }
  }
  return r;
}

}  // namespace qconf

#endif  // QCONF_CHECKS_HPP
