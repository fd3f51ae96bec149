#include <catch2/catch_amalgamated.hpp>

#include "qconf/checks.hpp"
#include "qconf/quantale.hpp"
#include "qconf/rational.hpp"

using namespace qconf;

static QVal iv(const char* s) { return QVal::interval(parse_rational(s)); }

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("0.25") == Rat(1, 4));
  CHECK(parse_rational(" 7 ") == Rat(7));
  CHECK(parse_rational("-2/8") == Rat(-1, 4));
  CHECK(parse_rational(".5") == Rat(1, 2));
  CHECK(format_rational(Rat(6, 8)) == "3/4");
  CHECK(format_rational(Rat(2)) == "2");
  CHECK(decimal_string(Rat(1, 3), 4) == "0.3333");
  CHECK(decimal_string(Rat(2, 3), 2) == "0.67");
  CHECK(decimal_string(Rat(1, 2), 0) == "1");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("boolean instance basics") {
  Quantale q(Instance::boolean);
  CHECK(q.tensor(QVal::boolean(true), QVal::boolean(false)) == QVal::boolean(false));
  CHECK(q.unit() == q.top());
  CHECK(q.join_all({QVal::boolean(false), QVal::boolean(true)}) == QVal::boolean(true));
  CHECK(truth_distance(q, TcMode::symmetric, QVal::boolean(true), QVal::boolean(false)) ==
        QVal::boolean(false));
  CHECK_THROWS_AS(q.tensor(QVal::boolean(true), iv("1/2")), std::invalid_argument);
}

TEST_CASE("interval instance: truncated addition/subtraction, reversed order") {
  Quantale q(Instance::interval);
  CHECK(q.tensor(iv("0.3"), iv("0.9")) == iv("1"));
  CHECK(q.tensor(iv("0"), iv("0.7")) == iv("0.7"));  // real 0 is the unit
  CHECK(q.tensor(iv("1/4"), iv("1/3")) == iv("7/12"));
  CHECK(q.hom(iv("0.3"), iv("0.5")) == iv("0.2"));
  CHECK(q.hom(iv("0.5"), iv("0.3")) == iv("0"));
  CHECK(q.unit() == iv("0"));
  CHECK(q.bottom() == iv("1"));
  CHECK(q.leq(iv("0.9"), iv("0.1")));  // quantale order reverses the reals
  CHECK(q.meet_all({iv("0.2"), iv("0.5")}) == iv("0.5"));  // meet = real max
  CHECK(q.join_all({iv("0.2"), iv("0.5")}) == iv("0.2"));  // join = real min
  CHECK(q.meet_all({}) == q.top());
  CHECK(q.join_all({}) == q.bottom());
  CHECK_THROWS_AS(QVal::interval(Rat(3, 2)), std::invalid_argument);
}

TEST_CASE("truth distance") {
  Quantale q(Instance::interval);
  CHECK(truth_distance(q, TcMode::symmetric, iv("0.2"), iv("0.7")) == iv("0.5"));
  CHECK(truth_distance(q, TcMode::directed, iv("0.7"), iv("0.2")) == iv("0"));
  CHECK(truth_distance(q, TcMode::directed, iv("0.2"), iv("0.7")) == iv("0.5"));
  CHECK(truth_distance(q, TcMode::directed, iv("2/3"), iv("2/3")) == q.unit());
  Quantale b(Instance::boolean);
  CHECK(truth_distance(b, TcMode::directed, QVal::boolean(true), QVal::boolean(false)) ==
        QVal::boolean(false));
  CHECK(truth_distance(b, TcMode::directed, QVal::boolean(false), QVal::boolean(true)) ==
        QVal::boolean(true));
}

TEST_CASE("quantale law batteries") {
  SelfTestResult rb = quantale_selftest(Instance::boolean, 0, 1);
  INFO(rb.log);
  CHECK(rb.ok);
  SelfTestResult ri = quantale_selftest(Instance::interval, 2000, 20260814);
  INFO(ri.log);
  CHECK(ri.ok);
}
