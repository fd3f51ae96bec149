// Command-line front end: parse a system description, run one of the
// conformance computations, print exact rationals (optionally with a rounded
// display column), as text or JSON.
//
// Exit codes: 0 success, 1 usage/input error, 2 computation disagreement.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qconf/checks.hpp"
#include "qconf/fixpoint.hpp"
#include "qconf/hm.hpp"
#include "qconf/logic.hpp"
#include "qconf/random_systems.hpp"
#include "qconf/system.hpp"

namespace {

using namespace qconf;

System load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json doc = Json::parse(in);
  return parse_system(doc);
}

struct Display {
  std::string format = "text";
  int decimal = -1;

  bool json() const { return format == "json"; }
  std::string value(const QVal& v) const {
    std::string out = v.str();
    if (decimal >= 0 && v.instance() == Instance::interval)
      out += " (" + decimal_string(v.rat(), decimal) + ")";
    return out;
  }
};

std::vector<std::vector<std::string>> partition_blocks(const Conformance& d,
                                                       const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> blocks;
  std::vector<int> block_of(d.n, -1);
  for (int i = 0; i < d.n; ++i) {
    if (block_of[i] >= 0) continue;
    block_of[i] = static_cast<int>(blocks.size());
    blocks.push_back({names[i]});
    for (int j = i + 1; j < d.n; ++j)
      if (block_of[j] < 0 && d.at(i, j).as_bool()) {
        block_of[j] = block_of[i];
        blocks.back().push_back(names[j]);
      }
  }
  return blocks;
}

void print_matrix(const Conformance& d, const std::vector<std::string>& names,
                  const Display& disp) {
  for (int i = 0; i < d.n; ++i) {
    std::cout << names[i] << ":";
    for (int j = 0; j < d.n; ++j) std::cout << " " << disp.value(d.at(i, j));
    std::cout << "\n";
  }
}

std::uint64_t subset_mask(const System& sys, const std::string& text) {
  MonadElement e = parse_element(sys, text);
  if (e.kind != Monad::subset)
    throw std::runtime_error("expected a state set like {s0,s1}");
  return e.bits;
}

int g_exit = 0;

void run_bisim(const std::string& file, bool crosscheck, const Display& disp) {
  System sys = load_system(file);
  Conformance d = bisimilarity(sys);
  auto blocks = partition_blocks(d, state_names(sys));
  bool agree = true;
  if (crosscheck) {
    FixpointReport em = bisimilarity_em_gfp(sys);
    agree = em.matrix.has_value() && *em.matrix == d;
    if (!agree) g_exit = 2;
  }
  if (disp.json()) {
    Json doc{{"partition", blocks}};
    if (crosscheck) doc["crosscheck"] = agree ? "agree" : "disagree";
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "partition:";
  for (const auto& b : blocks) {
    std::cout << " {";
    for (std::size_t i = 0; i < b.size(); ++i) std::cout << (i ? "," : "") << b[i];
    std::cout << "}";
  }
  std::cout << "\n";
  if (crosscheck) std::cout << "crosscheck: " << (agree ? "agree" : "disagree") << "\n";
}

void run_metric(const std::string& file, int iters, bool directed, const Display& disp) {
  System sys = load_system(file);
  FixpointReport rep;
  if (directed) {
    rep = sim_metric_directed(sys, iters);
  } else if (std::holds_alternative<MarkovTerm>(sys)) {
    rep = bisim_metric(sys, iters);
  } else {
    throw std::runtime_error(
        "metric: markov-term systems get the symmetric metric; pass --directed for "
        "unlabelled or fuzzy systems");
  }
  if (disp.json()) {
    std::cout << report_to_json(rep).dump(2) << "\n";
    return;
  }
  std::cout << "order: " << rep.order << "\n";
  std::cout << "converged: " << (rep.converged ? "yes" : "no") << " (" << rep.iterations
            << " iterations)\n";
  print_matrix(*rep.matrix, state_names(sys), disp);
}

void run_trace_eq(const std::string& file, const std::string& left, const std::string& right,
                  const Display& disp) {
  System sys = load_system(file);
  TraceEqResult res = trace_equivalence(sys, subset_mask(sys, left), subset_mask(sys, right));
  if (disp.json()) {
    Json doc{{"equivalent", res.equivalent},
             {"left_nodes", res.left_nodes},
             {"right_nodes", res.right_nodes}};
    if (!res.equivalent) doc["witness"] = word_str(alphabet_of(sys), res.witness);
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (res.equivalent)
    std::cout << "equivalent\n";
  else
    std::cout << "inequivalent, witness: " << word_str(alphabet_of(sys), res.witness) << "\n";
}

void run_trace_dist(const std::string& file, const std::string& left, const std::string& right,
                    int depth, const Display& disp) {
  System sys = load_system(file);
  FixpointReport rep =
      trace_distance(sys, parse_element(sys, left), parse_element(sys, right), depth);
  if (disp.json()) {
    std::cout << report_to_json(rep).dump(2) << "\n";
    return;
  }
  std::cout << "value: " << disp.value(*rep.value) << "\n";
  std::cout << "exact: " << (rep.exact ? "yes" : "no (depth-bounded)") << " (" << rep.iterations
            << " iterations)\n";
}

void run_eval(const std::string& file, const std::string& formula, const std::string& state,
              const std::string& element, const Display& disp) {
  System sys = load_system(file);
  if (state.empty() == element.empty())
    throw std::runtime_error("eval: give exactly one of --state or --element");

  bool linear = true;
  Formula f;
  try {
    f = parse_formula(formula, Dialect::em, &sys);
  } catch (const std::exception& em_err) {
    linear = false;
    try {
      f = parse_formula(formula, Dialect::branching, &sys);
    } catch (const std::exception& br_err) {
      throw std::runtime_error(std::string("not a linear formula (") + em_err.what() +
                               ") nor a branching one (" + br_err.what() + ")");
    }
  }

  QVal v;
  if (!element.empty()) {
    if (!linear)
      throw std::runtime_error("eval: branching formulas evaluate at states; use --state");
    v = eval_em_on_element(sys, std::get<EmFormula>(f), parse_element(sys, element));
  } else {
    int x = state_index(sys, state);
    v = linear ? eval_em(sys, std::get<EmFormula>(f), x)
               : eval_branching(sys, std::get<BranchingFormula>(f), x);
  }
  if (disp.json()) {
    Json doc{{"value", v.str()}, {"dialect", linear ? "linear" : "branching"}};
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << disp.value(v) << "\n";
}

void run_hm_check(const std::string& file, int depth, unsigned seed, int pairs,
                  const Display& disp) {
  System sys = load_system(file);
  std::vector<HmReport> reports;
  std::vector<std::string> headlines;

  if (const auto* ts = std::get_if<UnlabelledTs>(&sys)) {
    HmReport rep = hm_check_boolean_branching(*ts);
    rep.seed = seed;
    headlines.push_back("logical vs behavioural partition");
    reports.push_back(std::move(rep));
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < pairs; ++i) {
      MonadElement t1 = random_element(rng, sys);
      MonadElement t2 = random_element(rng, sys);
      HmReport rep = hm_check_linear(sys, t1, t2, depth);
      rep.seed = seed;
      headlines.push_back(element_str(sys, t1) + " vs " + element_str(sys, t2));
      reports.push_back(std::move(rep));
    }
  }

  bool all_ok = true;
  for (const HmReport& r : reports) all_ok &= r.ok;
  if (!all_ok) g_exit = 2;

  if (disp.json()) {
    Json doc{{"ok", all_ok}, {"reports", Json::array()}};
    for (std::size_t i = 0; i < reports.size(); ++i) {
      Json r = hm_report_to_json(reports[i]);
      r["pair"] = headlines[i];
      doc["reports"].push_back(std::move(r));
    }
    std::cout << doc.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const HmReport& r = reports[i];
    std::cout << "check " << i + 1 << " (" << headlines[i] << "): "
              << (r.ok ? "agree" : "DISAGREE") << "\n";
    if (!r.records.empty()) {
      const HmDepthRecord& last = r.records.back();
      std::cout << "  value at depth " << last.depth << ": " << disp.value(last.logical) << "\n";
    }
    if (!r.ok) std::cout << "  " << r.detail << "\n";
  }
  std::cout << (all_ok ? "hm-check: all routes agree" : "hm-check: disagreement found") << "\n";
}

void run_selftest(long samples, long pairs, unsigned seed, const Display& disp) {
  struct Row {
    std::string name;
    SelfTestResult res;
  };
  std::vector<Row> rows;
  rows.push_back({"quantale[boolean]", quantale_selftest(Instance::boolean, samples, seed)});
  rows.push_back({"quantale[interval]", quantale_selftest(Instance::interval, samples, seed)});
  rows.push_back({"conformance", conformance_selftest(pairs, 5, seed)});

  bool all_ok = true;
  for (const Row& r : rows) all_ok &= r.res.ok;
  if (!all_ok) g_exit = 2;

  if (disp.json()) {
    Json doc{{"ok", all_ok}, {"suites", Json::array()}};
    for (const Row& r : rows)
      doc["suites"].push_back(
          {{"name", r.name}, {"ok", r.res.ok}, {"checks", r.res.checks}, {"log", r.res.log}});
    std::cout << doc.dump(2) << "\n";
    return;
  }
  for (const Row& r : rows) {
    std::cout << r.name << ": " << r.res.checks << " checks, " << (r.res.ok ? "ok" : "FAILED")
              << "\n";
    if (!r.res.ok) std::cout << r.res.log;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantitative conformances: equivalences, metrics, and logics on finite systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Display disp;
  app.add_option("--format", disp.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--decimal", disp.decimal, "extra rounded display column with k digits");

  std::string file, left, right, formula, state, element;
  bool crosscheck = false, directed = false;
  int iters = 64, depth = 4, pairs = 4;
  unsigned seed = 1;
  long samples = 20000, selftest_pairs = 1200;

  CLI::App* bisim = app.add_subcommand("bisim", "coarsest bisimulation partition");
  bisim->add_option("file", file, "system description (json)")->required();
  bisim->add_flag("--crosscheck", crosscheck, "compare against the relation-lifting fixpoint");
  bisim->callback([&] { run_bisim(file, crosscheck, disp); });

  CLI::App* metric = app.add_subcommand("metric", "behavioural distance matrix");
  metric->add_option("file", file)->required();
  metric->add_option("--iters", iters, "iteration budget")->capture_default_str();
  metric->add_flag("--directed", directed, "directed simulation distance");
  metric->callback([&] { run_metric(file, iters, directed, disp); });

  CLI::App* teq = app.add_subcommand("trace-eq", "trace equivalence of two state sets");
  teq->add_option("file", file)->required();
  teq->add_option("--left", left, "state set, e.g. {q0,q1}")->required();
  teq->add_option("--right", right)->required();
  teq->callback([&] { run_trace_eq(file, left, right, disp); });

  CLI::App* tdist = app.add_subcommand("trace-dist", "trace distance of two elements");
  tdist->add_option("file", file)->required();
  tdist->add_option("--left", left, "element, e.g. {x0:1/2,x1:1/2}")->required();
  tdist->add_option("--right", right)->required();
  tdist->add_option("--depth", depth, "iteration depth")->capture_default_str();
  tdist->callback([&] { run_trace_dist(file, left, right, depth, disp); });

  CLI::App* ev = app.add_subcommand("eval", "evaluate a formula");
  ev->add_option("file", file)->required();
  ev->add_option("--formula", formula, "formula text")->required();
  ev->add_option("--state", state, "state name");
  ev->add_option("--element", element, "monad element");
  ev->callback([&] { run_eval(file, formula, state, element, disp); });

  CLI::App* hm = app.add_subcommand("hm-check", "multi-route agreement checks");
  hm->add_option("file", file)->required();
  hm->add_option("--depth", depth, "linear check depth")->capture_default_str();
  hm->add_option("--seed", seed, "element sampling seed")->capture_default_str();
  hm->add_option("--pairs", pairs, "number of sampled element pairs")->capture_default_str();
  hm->callback([&] { run_hm_check(file, depth, seed, pairs, disp); });

  CLI::App* st = app.add_subcommand("selftest", "algebraic law batteries");
  st->add_option("--samples", samples, "random samples per quantale law")->capture_default_str();
  st->add_option("--pairs", selftest_pairs, "random adjunction pairs")->capture_default_str();
  st->add_option("--seed", seed)->capture_default_str();
  st->callback([&] { run_selftest(samples, selftest_pairs, seed, disp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit;
}
