#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "fixture_io.hpp"
#include "qconf/checks.hpp"
#include "qconf/hm.hpp"

using namespace qconf;

namespace {

Lts random_lts(std::mt19937_64& rng, int max_states, int max_labels) {
  Lts lts;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  int k = 1 + static_cast<int>(rng() % max_labels);
  for (int i = 0; i < n; ++i) lts.states.push_back("s" + std::to_string(i));
  for (int a = 0; a < k; ++a) lts.alphabet.push_back(std::string(1, char('a' + a)));
  lts.succ.assign(n, std::vector<std::uint64_t>(k, 0));
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a)
      lts.succ[x][a] = rng() % (std::uint64_t{1} << n);
  return lts;
}

UnlabelledTs random_uts(std::mt19937_64& rng, int max_states) {
  UnlabelledTs ts;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  for (int i = 0; i < n; ++i) ts.states.push_back("u" + std::to_string(i));
  for (int x = 0; x < n; ++x) ts.succ.push_back(rng() % (std::uint64_t{1} << n));
  return ts;
}

DistVec random_dist(std::mt19937_64& rng, int n) {
  std::vector<Rat> w(n, Rat(0));
  Rat total(0);
  for (int reps = 0; reps < 2 || total == 0; ++reps) {
    int x = static_cast<int>(rng() % n);
    Rat add(1 + rng() % 3);
    w[x] += add;
    total += add;
  }
  DistVec d;
  for (int x = 0; x < n; ++x)
    if (w[x] != 0) d.emplace_back(x, w[x] / total);
  return d;
}

ProbAutomaton random_pa(std::mt19937_64& rng, int max_states, int max_labels) {
  ProbAutomaton pa;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  int k = 1 + static_cast<int>(rng() % max_labels);
  for (int i = 0; i < n; ++i) pa.states.push_back("x" + std::to_string(i));
  for (int a = 0; a < k; ++a) pa.alphabet.push_back(std::string(1, char('a' + a)));
  pa.trans.assign(n, std::vector<DistVec>(k));
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a) pa.trans[x][a] = random_dist(rng, n);
  for (int x = 0; x < n; ++x) pa.payoff.push_back(random_unit_rational(rng, 8));
  return pa;
}

FuzzyLts random_fuzzy(std::mt19937_64& rng, int max_states, int max_labels) {
  FuzzyLts fl;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  int k = 1 + static_cast<int>(rng() % max_labels);
  for (int i = 0; i < n; ++i) fl.states.push_back("f" + std::to_string(i));
  for (int a = 0; a < k; ++a) fl.alphabet.push_back(std::string(1, char('a' + a)));
  fl.weight.assign(n, std::vector<std::vector<Rat>>(k, std::vector<Rat>(n, Rat(1))));
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < k; ++a)
      for (int y = 0; y < n; ++y)
        fl.weight[x][a][y] = random_unit_rational(rng, 6);
  return fl;
}

MonadElement random_fuzzy_element(std::mt19937_64& rng, int n) {
  std::vector<Rat> memb;
  for (int x = 0; x < n; ++x) memb.push_back(random_unit_rational(rng, 6));
  return fuzzy_element(memb);
}

void require_all_agree(const HmReport& rep) {
  INFO(hm_report_to_json(rep).dump(2));
  REQUIRE(rep.ok);
  for (const HmDepthRecord& rec : rep.records) REQUIRE(rec.agree);
}

}  // namespace

TEST_CASE("linear check on identical elements is unit everywhere") {
  System pa = load_fixture("pa_half.json");
  MonadElement t = parse_element(pa, "{x0:1/3,x1:2/3}");
  HmReport rep = hm_check_linear(pa, t, t, 5);
  require_all_agree(rep);
  REQUIRE(rep.records.size() == 6);
  Quantale q{Instance::interval};
  for (const HmDepthRecord& rec : rep.records) CHECK(rec.logical == q.unit());
}

TEST_CASE("linear check separates the probabilistic fixture at depth one") {
  System pa = load_fixture("pa_half.json");
  HmReport rep =
      hm_check_linear(pa, parse_element(pa, "{x0:1}"), parse_element(pa, "{x1:1}"), 6);
  require_all_agree(rep);
  CHECK(rep.records[0].logical == QVal::interval(0));  // empty meet
  for (int n = 1; n <= 6; ++n) CHECK(rep.records[n].logical == QVal::interval(1));
}

TEST_CASE("linear check on the equivalent automata pair") {
  System lts = load_fixture("lts_nfa_pair.json");
  HmReport rep =
      hm_check_linear(lts, parse_element(lts, "{q0}"), parse_element(lts, "{q2}"), 5);
  require_all_agree(rep);
  for (int n = 1; n <= 5; ++n) CHECK(rep.records[n].logical.as_bool());
}

TEST_CASE("linear check reports inequivalence values while routes agree") {
  System lts = load_fixture("lts_dead.json");
  HmReport rep = hm_check_linear(lts, parse_element(lts, "{}"),
                                 parse_element(lts, "{s1}"), 4);
  require_all_agree(rep);
  // only the emptiness constant separates an empty set from a deadlock
  for (int n = 1; n <= 4; ++n) CHECK_FALSE(rep.records[n].logical.as_bool());
}

TEST_CASE("linear fuzzy checks are directed") {
  System fz = load_fixture("fuzzy_small.json");
  MonadElement e0 = unit_element(fz, 0);
  MonadElement e1 = unit_element(fz, 1);

  HmReport fwd = hm_check_linear(fz, e0, e1, 5);
  require_all_agree(fwd);
  for (const HmDepthRecord& rec : fwd.records) CHECK(rec.logical == QVal::interval(0));

  HmReport back = hm_check_linear(fz, e1, e0, 5);
  require_all_agree(back);
  CHECK(back.records[1].logical == QVal::interval(0));
  CHECK(back.records[2].logical == QVal::interval(Rat(1, 4)));
  CHECK(back.records[3].logical == QVal::interval(Rat(1, 2)));
  CHECK(back.records[5].logical == QVal::interval(Rat(1, 2)));
}

TEST_CASE("behaviour route matches the distance engine") {
  std::mt19937_64 rng(511);
  for (int trial = 0; trial < 10; ++trial) {
    ProbAutomaton pa = random_pa(rng, 3, 2);
    System sys = pa;
    int n = static_cast<int>(pa.states.size());
    MonadElement t1 = dist_element(random_dist(rng, n));
    MonadElement t2 = dist_element(random_dist(rng, n));
    for (int depth = 1; depth <= 4; ++depth) {
      HmReport rep = hm_check_linear(sys, t1, t2, depth);
      FixpointReport dist = trace_distance(sys, t1, t2, depth);
      CHECK(rep.records[depth].behaviour == *dist.value);
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    FuzzyLts fl = random_fuzzy(rng, 3, 2);
    System sys = fl;
    int n = static_cast<int>(fl.states.size());
    MonadElement t1 = random_fuzzy_element(rng, n);
    MonadElement t2 = random_fuzzy_element(rng, n);
    for (int depth = 1; depth <= 4; ++depth) {
      HmReport rep = hm_check_linear(sys, t1, t2, depth);
      FixpointReport dist = trace_distance(sys, t1, t2, depth);
      CHECK(rep.records[depth].behaviour == *dist.value);
    }
  }
}

TEST_CASE("three routes agree on random transition systems") {
  std::mt19937_64 rng(512);
  for (int trial = 0; trial < 30; ++trial) {
    Lts lts = random_lts(rng, 5, 2);
    System sys = lts;
    int n = static_cast<int>(lts.states.size());
    std::uint64_t full = (std::uint64_t{1} << n) - 1;
    MonadElement t1 = subset_element(rng() & full);
    MonadElement t2 = subset_element(rng() & full);
    HmReport rep = hm_check_linear(sys, t1, t2, 6);
    rep.seed = 512;
    require_all_agree(rep);
  }
}

TEST_CASE("three routes agree on random probabilistic automata") {
  std::mt19937_64 rng(513);
  for (int trial = 0; trial < 20; ++trial) {
    ProbAutomaton pa = random_pa(rng, 4, 2);
    System sys = pa;
    int n = static_cast<int>(pa.states.size());
    MonadElement t1 = dist_element(random_dist(rng, n));
    MonadElement t2 = dist_element(random_dist(rng, n));
    HmReport rep = hm_check_linear(sys, t1, t2, 6);
    rep.seed = 513;
    require_all_agree(rep);
  }
}

TEST_CASE("three routes agree on random fuzzy systems") {
  std::mt19937_64 rng(514);
  for (int trial = 0; trial < 20; ++trial) {
    FuzzyLts fl = random_fuzzy(rng, 4, 2);
    System sys = fl;
    int n = static_cast<int>(fl.states.size());
    HmReport rep = hm_check_linear(sys, random_fuzzy_element(rng, n),
                                   random_fuzzy_element(rng, n), 5);
    rep.seed = 514;
    require_all_agree(rep);
  }
}

TEST_CASE("boolean branching check") {
  SECTION("uniform looping fixture gives a single class") {
    System uts = load_fixture("uts_small.json");
    HmReport rep = hm_check_boolean_branching(std::get<UnlabelledTs>(uts));
    CHECK(rep.ok);
    Conformance d = bisimilarity(uts);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(d.at(i, j).as_bool());
  }
  SECTION("a chain is pairwise distinguished") {
    UnlabelledTs chain;
    chain.states = {"u0", "u1", "u2"};
    chain.succ = {0, 1, 2};  // u0 halts, u1 -> u0, u2 -> u1
    HmReport rep = hm_check_boolean_branching(chain);
    CHECK(rep.ok);
    Conformance d = bisimilarity(System{chain});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(d.at(i, j).as_bool() == (i == j));
  }
  SECTION("random systems") {
    std::mt19937_64 rng(515);
    for (int trial = 0; trial < 20; ++trial) {
      HmReport rep = hm_check_boolean_branching(random_uts(rng, 5));
      rep.seed = 515;
      INFO(hm_report_to_json(rep).dump(2));
      REQUIRE(rep.ok);
    }
  }
}

TEST_CASE("equivalent liftings check") {
  Quantale q{Instance::boolean};
  SECTION("identity relation") {
    Conformance d(Instance::boolean, TcMode::directed, 2, QVal::boolean(false));
    d.set(0, 0, QVal::boolean(true));
    d.set(1, 1, QVal::boolean(true));
    auto verdict = equivalent_liftings_check(d);
    REQUIRE(verdict.has_value());
    CHECK(*verdict);
  }
  SECTION("all-related relation") {
    auto verdict = equivalent_liftings_check(Conformance::top(Instance::boolean, TcMode::directed, 2));
    REQUIRE(verdict.has_value());
    CHECK(*verdict);
  }
  SECTION("all equivalences on up to three points") {
    for (int n = 2; n <= 3; ++n)
      for (const auto& blocks : all_partitions(n)) {
        Conformance d = equivalence_from_blocks(blocks);
        auto verdict = equivalent_liftings_check(d);
        REQUIRE(verdict.has_value());
        CHECK(*verdict);
      }
  }
  SECTION("a relation not fixed by the co-closure gives no verdict") {
    // fails transitivity: 0->1, 1->2 but not 0->2
    Conformance d(Instance::boolean, TcMode::directed, 3, QVal::boolean(false));
    for (int i = 0; i < 3; ++i) d.set(i, i, QVal::boolean(true));
    d.set(0, 1, QVal::boolean(true));
    d.set(1, 2, QVal::boolean(true));
    CHECK_FALSE(equivalent_liftings_check(d).has_value());
  }
}

TEST_CASE("hm reports serialize") {
  System pa = load_fixture("pa_half.json");
  HmReport rep =
      hm_check_linear(pa, parse_element(pa, "{x0:1}"), parse_element(pa, "{x1:1}"), 3);
  Json doc = hm_report_to_json(rep);
  CHECK(doc["check"] == "linear");
  CHECK(doc["ok"] == true);
  CHECK(doc["records"].size() == 4);
  CHECK(doc["records"][1]["logical"] == "1");
  CHECK(doc["records"][1]["agree"] == true);
  CHECK(doc.contains("seed"));
  CHECK_FALSE(doc.contains("fail_depth"));

  HmReport bad;
  bad.check = "linear";
  bad.ok = false;
  bad.fail_depth = 2;
  bad.fail_word = "ab";
  bad.fail_formula = "[a][b]1";
  Json bad_doc = hm_report_to_json(bad);
  CHECK(bad_doc["fail_depth"] == 2);
  CHECK(bad_doc["fail_formula"] == "[a][b]1");
}
