#include <catch2/catch_amalgamated.hpp>

#include "fixture_io.hpp"
#include "qconf/system.hpp"

using namespace qconf;

namespace {
Json reparse_roundtrip(const std::string& name) {
  Json once = serialize_system(load_fixture(name));
  Json twice = serialize_system(parse_system(once));
  CHECK(once == twice);
  return once;
}
}  // namespace

TEST_CASE("probabilistic fixture parses with exact weights") {
  System sys = load_fixture("pa_half.json");
  const auto& pa = std::get<ProbAutomaton>(sys);
  REQUIRE(pa.states == std::vector<std::string>{"x0", "x1"});
  REQUIRE(pa.alphabet == std::vector<std::string>{"a"});
  REQUIRE(pa.trans[0][0] == DistVec{{0, Rat(1) / 2}, {1, Rat(1) / 2}});
  REQUIRE(pa.trans[1][0] == DistVec{{1, Rat(1)}});
  CHECK(pa.payoff[0] == 0);
  CHECK(pa.payoff[1] == 1);
}

TEST_CASE("serialization round-trips every fixture") {
  for (const char* name : {"pa_half.json", "lts_dead.json", "lts_nfa_pair.json",
                           "uts_small.json", "fuzzy_small.json", "mt_three.json"}) {
    INFO(name);
    Json doc = reparse_roundtrip(name);
    CHECK(doc["states"] == load_fixture_json(name)["states"]);
  }
}

TEST_CASE("lts successor masks and duplicate merging") {
  System sys = load_fixture("lts_nfa_pair.json");
  const auto& lts = std::get<Lts>(sys);
  CHECK(lts.succ[0][0] == 0b011u);
  CHECK(lts.succ[1][0] == 0b010u);
  CHECK(lts.succ[2][0] == 0b100u);

  Json doc = load_fixture_json("lts_nfa_pair.json");
  doc["transitions"].push_back(doc["transitions"][0]);  // repeat q0-a->q0
  System again = parse_system(doc);
  CHECK(std::get<Lts>(again).succ[0][0] == 0b011u);
}

TEST_CASE("fuzzy weights default to the quantale zero") {
  System sys = load_fixture("fuzzy_small.json");
  const auto& fl = std::get<FuzzyLts>(sys);
  CHECK(fl.weight[0][0][0] == Rat(1) / 4);
  CHECK(fl.weight[0][0][1] == Rat(1) / 2);
  CHECK(fl.weight[1][0][0] == 1);  // absent edge
  CHECK(fl.weight[1][0][1] == 0);  // explicit unit weight survives the round-trip
  Json doc = serialize_system(sys);
  CHECK(doc["transitions"].size() == 3);
}

TEST_CASE("markov-term states split into stepping and terminal") {
  System sys = load_fixture("mt_three.json");
  const auto& mt = std::get<MarkovTerm>(sys);
  REQUIRE(mt.step[0]);
  REQUIRE(mt.step[1]);
  CHECK_FALSE(mt.step[2]);
  CHECK((*mt.step[0]) == DistVec{{1, Rat(1) / 2}, {2, Rat(1) / 2}});
}

TEST_CASE("schema violations are rejected with context") {
  Json pa = load_fixture_json("pa_half.json");

  SECTION("missing distribution breaks totality") {
    pa["transitions"].erase(1);
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("must be total"));
  }
  SECTION("distribution must sum to one") {
    pa["transitions"][0]["dist"]["x1"] = "1/3";
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("sums to 5/6"));
  }
  SECTION("duplicate distribution per state and label") {
    pa["transitions"].push_back(pa["transitions"][0]);
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("duplicate"));
  }
  SECTION("unknown state name carries its location") {
    pa["transitions"][0]["dist"]["zz"] = "0";
    CHECK_THROWS_WITH(parse_system(pa),
                      Catch::Matchers::ContainsSubstring("unknown state 'zz' in transitions[0]"));
  }
  SECTION("payoffs outside the unit interval") {
    pa["payoffs"]["x1"] = "3/2";
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("outside [0,1]"));
  }
  SECTION("weights must be string rationals") {
    pa["transitions"][1]["dist"]["x1"] = 1.0;
    CHECK_THROWS(parse_system(pa));
  }
  SECTION("duplicate state names") {
    pa["states"] = {"x0", "x0"};
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("duplicate states"));
  }
  SECTION("unknown top-level fields") {
    pa["extras"] = 1;
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("unknown field"));
  }
  SECTION("unknown type") {
    pa["type"] = "petri-net";
    CHECK_THROWS_WITH(parse_system(pa), Catch::Matchers::ContainsSubstring("unknown system type"));
  }

  SECTION("subset systems are capped at 64 states") {
    Json big;
    big["type"] = "lts";
    big["alphabet"] = {"a"};
    big["states"] = Json::array();
    for (int i = 0; i < 65; ++i) big["states"].push_back("s" + std::to_string(i));
    CHECK_THROWS_WITH(parse_system(big), Catch::Matchers::ContainsSubstring("subset limit"));
  }
  SECTION("markov-term states must step or terminate, not both") {
    Json mt = load_fixture_json("mt_three.json");
    Json broken = mt;
    broken["terminal"].push_back("m1");
    CHECK_THROWS_WITH(parse_system(broken),
                      Catch::Matchers::ContainsSubstring("both terminal and stepping"));
    broken = mt;
    broken["terminal"] = Json::array();
    CHECK_THROWS_WITH(parse_system(broken),
                      Catch::Matchers::ContainsSubstring("terminal or carry a distribution"));
  }
}

TEST_CASE("degenerate one-state system with empty alphabet") {
  Json doc;
  doc["type"] = "lts";
  doc["states"] = {"only"};
  doc["alphabet"] = Json::array();
  System sys = parse_system(doc);
  CHECK(n_states(sys) == 1);
  CHECK(alphabet_of(sys).empty());
  CHECK(serialize_system(parse_system(serialize_system(sys))) == serialize_system(sys));
}

TEST_CASE("monad element constructors canonicalize") {
  MonadElement d = dist_element({{1, Rat(1) / 2}, {0, Rat(1) / 4}, {1, Rat(1) / 4}, {2, Rat(0)}});
  CHECK(d.weights == DistVec{{0, Rat(1) / 4}, {1, Rat(3) / 4}});
  CHECK_THROWS_WITH(dist_element({{0, Rat(1) / 2}}),
                    Catch::Matchers::ContainsSubstring("sum to 1/2"));
  CHECK_THROWS(dist_element({{0, Rat(3) / 2}, {1, Rat(-1) / 2}}));
  CHECK_THROWS(fuzzy_element({Rat(2)}));
  CHECK(subset_element(5).bits == 5u);
  CHECK(d < dist_element({{0, Rat(1)}}));  // ordering is usable for interning
  CHECK_FALSE(d < d);
}

TEST_CASE("unit elements per system kind") {
  System lts = load_fixture("lts_nfa_pair.json");
  CHECK(unit_element(lts, 2) == subset_element(0b100));

  System pa = load_fixture("pa_half.json");
  CHECK(unit_element(pa, 1) == dist_element({{1, Rat(1)}}));

  System fl = load_fixture("fuzzy_small.json");
  MonadElement pt = unit_element(fl, 0);
  CHECK(pt.memb == std::vector<Rat>{Rat(0), Rat(1)});

  System mt = load_fixture("mt_three.json");
  CHECK_THROWS(unit_element(mt, 0));
  CHECK_THROWS(unit_element(lts, 3));
}

TEST_CASE("element text syntax round-trips") {
  System lts = load_fixture("lts_nfa_pair.json");
  MonadElement sub = parse_element(lts, "{q0, q2}");
  CHECK(sub.bits == 0b101u);
  CHECK(element_str(lts, sub) == "{q0,q2}");
  CHECK(parse_element(lts, "{}").bits == 0u);
  CHECK(element_str(lts, parse_element(lts, "{}")) == "{}");

  System pa = load_fixture("pa_half.json");
  MonadElement mix = parse_element(pa, "{x0:1/2, x1:1/2}");
  CHECK(mix == dist_element({{0, Rat(1) / 2}, {1, Rat(1) / 2}}));
  CHECK(element_str(pa, mix) == "{x0:1/2,x1:1/2}");

  System fl = load_fixture("fuzzy_small.json");
  MonadElement fz = parse_element(fl, "{f0:3/4}");
  CHECK(fz.memb == std::vector<Rat>{Rat(3) / 4, Rat(1)});
  CHECK(element_str(fl, fz) == "{f0:3/4}");
  CHECK(element_str(fl, parse_element(fl, "{}")) == "{}");

  CHECK_THROWS_WITH(parse_element(lts, "{q0:1/2}"),
                    Catch::Matchers::ContainsSubstring("no weights"));
  CHECK_THROWS_WITH(parse_element(pa, "{x0}"),
                    Catch::Matchers::ContainsSubstring("need weights"));
  CHECK_THROWS_WITH(parse_element(pa, "{x0:1/3,x1:1/3}"),
                    Catch::Matchers::ContainsSubstring("expected 1"));
  CHECK_THROWS_WITH(parse_element(lts, "{zz}"),
                    Catch::Matchers::ContainsSubstring("unknown state"));
  CHECK_THROWS_WITH(parse_element(lts, "q0"), Catch::Matchers::ContainsSubstring("{..}"));
}
