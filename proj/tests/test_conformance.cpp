#include <catch2/catch_amalgamated.hpp>

#include "qconf/checks.hpp"
#include "qconf/conformance.hpp"

using namespace qconf;

static QVal iv(const char* s) { return QVal::interval(parse_rational(s)); }
static QVal bv(bool b) { return QVal::boolean(b); }

TEST_CASE("alpha on small predicate sets") {
  Quantale b(Instance::boolean);
  CHECK(alpha(b, TcMode::symmetric, 3, {}) == Conformance::top(Instance::boolean, TcMode::symmetric, 3));

  // one Boolean predicate separating 0 from 1 yields the discrete relation
  Conformance d = alpha(b, TcMode::symmetric, 2, {{bv(false), bv(true)}});
  CHECK(d.at(0, 0) == bv(true));
  CHECK(d.at(1, 1) == bv(true));
  CHECK(d.at(0, 1) == bv(false));
  CHECK(d.at(1, 0) == bv(false));

  Quantale q(Instance::interval);
  Conformance e = alpha(q, TcMode::symmetric, 2, {{iv("0.2"), iv("0.7")}});
  CHECK(e.at(0, 1) == iv("0.5"));
  CHECK(e.at(0, 0) == q.unit());
  CHECK(is_valid_conformance(q, e));
}

TEST_CASE("gamma membership") {
  Quantale q(Instance::interval);
  Conformance d = alpha(q, TcMode::symmetric, 2, {{iv("0"), iv("1/2")}});
  CHECK(d.at(0, 1) == iv("1/2"));
  CHECK(gamma_contains(q, d, {iv("1/3"), iv("1/3")}));  // constants always pass
  CHECK(gamma_contains(q, d, {iv("0"), iv("1/2")}));    // Galois unit
  CHECK_FALSE(gamma_contains(q, d, {iv("0"), iv("0.9")}));
}

TEST_CASE("distance_row lemma") {
  Quantale q(Instance::interval);
  Conformance d = alpha(q, TcMode::symmetric, 2, {{iv("0"), iv("0.3")}});
  Predicate row = distance_row(d, 0);
  CHECK(row[0] == q.unit());
  CHECK(row[1] == iv("0.3"));
  CHECK(gamma_contains(q, d, row));
  CHECK(truth_distance(q, d.kind, row[0], row[1]) == d.at(0, 1));
  CHECK_THROWS_AS(distance_row(d, 5), std::out_of_range);

  // directed case: h(x) = d(y,x) with the directed truth distance
  Conformance dd(Instance::interval, TcMode::directed, 2, q.unit());
  dd.at(0, 1) = iv("0.4");
  dd.at(1, 0) = iv("0.1");
  REQUIRE(is_valid_conformance(q, dd));
  Predicate r0 = distance_row(dd, 0);
  CHECK(gamma_contains(q, dd, r0));
  CHECK(truth_distance(q, TcMode::directed, r0[0], r0[1]) == dd.at(0, 1));
}

TEST_CASE("reindex") {
  Quantale q(Instance::interval);
  Conformance d = alpha(q, TcMode::symmetric, 2, {{iv("0"), iv("0.3")}});
  Conformance same = reindex({0, 1}, d);
  CHECK(same == d);
  Conformance collapsed = reindex({0, 0, 1}, d);
  CHECK(collapsed.n == 3);
  CHECK(collapsed.at(0, 1) == q.unit());
  CHECK(collapsed.at(0, 2) == iv("0.3"));
  CHECK(is_valid_conformance(q, collapsed));
  CHECK_THROWS_AS(reindex({0, 7}, d), std::out_of_range);
}

TEST_CASE("coclosure identity") {
  // discrete relation
  Conformance disc = equivalence_from_blocks({0, 1, 2});
  CHECK(coclosure_boolean(disc) == disc);
  // all-related relation
  Conformance all = equivalence_from_blocks({0, 0, 0});
  CHECK(coclosure_boolean(all) == all);
  // a 4-state equivalence
  Conformance e = equivalence_from_blocks({0, 1, 0, 1});
  CHECK(coclosure_boolean(e) == e);
  // directed case: preorders are also fixed points
  Quantale b(Instance::boolean);
  Conformance pre(Instance::boolean, TcMode::directed, 3, b.unit());
  pre.at(1, 0) = bv(false);
  pre.at(2, 0) = bv(false);
  pre.at(2, 1) = bv(false);  // chain 0 <= 1 <= 2 upward
  REQUIRE(is_valid_conformance(b, pre));
  CHECK(coclosure_boolean(pre) == pre);

  Conformance big(Instance::boolean, TcMode::symmetric, 13, b.unit());
  CHECK_THROWS_AS(coclosure_boolean(big), std::invalid_argument);
}

TEST_CASE("meet and leq") {
  Quantale q(Instance::interval);
  Conformance d1 = alpha(q, TcMode::symmetric, 2, {{iv("0"), iv("0.3")}});
  Conformance t = Conformance::top(Instance::interval, TcMode::symmetric, 2);
  CHECK(conf_meet(q, d1, t) == d1);
  CHECK(conf_leq(q, conf_meet(q, d1, d1), d1));
  CHECK(conf_leq(q, d1, t));
  CHECK_FALSE(conf_leq(q, t, d1));
}

TEST_CASE("conformance JSON shape") {
  Conformance e = equivalence_from_blocks({0, 1});
  nlohmann::json j = conformance_to_json(e);
  CHECK(j["kind"] == "symmetric");
  CHECK(j["entries"][0][0] == "1");
  CHECK(j["entries"][0][1] == "0");
}

TEST_CASE("galois battery") {
  SelfTestResult r = conformance_selftest(300, 5, 20260814);
  INFO(r.log);
  CHECK(r.ok);
}
