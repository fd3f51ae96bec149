#ifndef QCONF_HM_HPP
#define QCONF_HM_HPP

// Comparison drivers that compute the same quantity along independent routes
// and report the first depth at which any two routes disagree. The three
// linear routes are: a meet over evaluated formulas, iterates of the machine
// behaviour step, and brute-force word/path oracles.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qconf/determinize.hpp"
#include "qconf/fixpoint.hpp"
#include "qconf/lifting.hpp"
#include "qconf/logic.hpp"
#include "qconf/oracles.hpp"

namespace qconf {

struct HmDepthRecord {
  int depth = 0;
  QVal logical, behaviour, oracle;
  bool agree = true;
};

struct HmReport {
  std::string check;
  bool ok = true;
  std::vector<HmDepthRecord> records;
  int fail_depth = -1;       // first depth where the routes split
  std::string fail_formula;  // formula attaining the logical value there
  std::string fail_word;     // word attaining the oracle value there
  std::string detail;
  std::uint64_t seed = 0;  // set by randomized drivers for reproducibility
};

inline Json hm_report_to_json(const HmReport& r) {
  Json recs = Json::array();
  for (const HmDepthRecord& rec : r.records)
    recs.push_back({{"depth", rec.depth},
                    {"logical", rec.logical.str()},
                    {"behaviour", rec.behaviour.str()},
                    {"oracle", rec.oracle.str()},
                    {"agree", rec.agree}});
  Json doc{{"check", r.check}, {"ok", r.ok}, {"records", recs}, {"seed", r.seed}};
  if (!r.ok) {
    doc["fail_depth"] = r.fail_depth;
    doc["fail_formula"] = r.fail_formula;
    doc["fail_word"] = r.fail_word;
  }
  if (!r.detail.empty()) doc["detail"] = r.detail;
  return doc;
}

namespace detail {

// All words over k labels of length < n, shortest first.
inline std::vector<Word> words_below(int k, int n) {
  std::vector<Word> out{{}};
  std::size_t level_begin = 0;
  for (int len = 1; len < n; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int a = 0; a < k; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

}  // namespace detail

// Distance between two monad elements computed three independent ways at
// every depth n <= depth: (a) a meet over all formulas of modal depth < n,
// (b) n machine behaviour steps from the top table, (c) the word/path
// oracles over words shorter than n. Disagreements are reported, never fixed.
inline HmReport hm_check_linear(const System& sys, const MonadElement& t1,
                                const MonadElement& t2, int depth) {
  HmReport rep;
  rep.check = "linear";
  if (t1.kind != monad_of(sys) || t2.kind != monad_of(sys))
    throw std::invalid_argument("elements do not match the system monad");

  bool is_pa = std::holds_alternative<ProbAutomaton>(sys);
  bool is_fuzzy = std::holds_alternative<FuzzyLts>(sys);
  Instance inst = instance_of(sys);
  TcMode kind = is_fuzzy ? TcMode::directed : TcMode::symmetric;
  Quantale q{inst};
  int k = static_cast<int>(alphabet_of(sys).size());

  // Route (a): logical distances, one running meet per depth.
  std::vector<EmFormula> formulas = enumerate_em_formulas(sys, depth > 0 ? depth - 1 : 0);
  std::vector<QVal> formula_dist;
  for (const EmFormula& f : formulas)
    formula_dist.push_back(truth_distance(q, kind, eval_em_on_element(sys, f, t1),
                                          eval_em_on_element(sys, f, t2)));
  std::vector<QVal> logical(depth + 1, q.top());
  {
    QVal acc = q.top();
    std::size_t next_formula = 0;
    for (int n = 1; n <= depth; ++n) {
      while (next_formula < formulas.size() &&
             static_cast<int>(formulas[next_formula].labels.size()) < n)
        acc = q.meet(acc, formula_dist[next_formula++]);
      logical[n] = acc;
    }
  }

  // Route (b): behaviour iterates at the seed pair, over a pair table
  // materialized out to the full horizon so that round n is the true
  // n-th iterate.
  std::vector<QVal> behaviour(depth + 1, q.top());
  {
    PairTable tab;
    tab.inst = inst;
    tab.kind = kind;
    int i = tab.intern(t1);
    int j = tab.intern(t2);
    tab.set(i, j, q.top());
    std::deque<std::pair<std::pair<int, int>, int>> frontier{{tab.key(i, j), 0}};
    std::map<MonadElement, DetStep> memo;
    auto step_of = [&](const MonadElement& e) -> const DetStep& {
      auto it = memo.find(e);
      if (it == memo.end()) it = memo.emplace(e, det_step(sys, e)).first;
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
        tab.set(ii, jj, q.top());
        frontier.push_back({tab.key(ii, jj), dist + 1});
      }
    }
    for (int n = 1; n <= depth; ++n) {
      tab = machine_behaviour_step(sys, tab);
      behaviour[n] = tab.at(i, j);
    }
  }

  // Route (c): brute-force oracles over words shorter than n.
  std::vector<QVal> oracle(depth + 1, q.top());
  std::vector<Word> words = detail::words_below(k, depth);
  std::vector<std::string> oracle_word(depth + 1, "");
  if (is_pa) {
    const auto& pa = std::get<ProbAutomaton>(sys);
    QVal acc = q.top();
    std::size_t next_word = 0;
    for (int n = 1; n <= depth; ++n) {
      for (; next_word < words.size() &&
             static_cast<int>(words[next_word].size()) < n;
           ++next_word) {
        Rat a = word_payoff_oracle(pa, t1.weights, words[next_word]);
        Rat b = word_payoff_oracle(pa, t2.weights, words[next_word]);
        QVal d = QVal::interval(a < b ? b - a : a - b);
        if (q.leq(d, acc)) {
          acc = d;
          oracle_word[n] = word_str(alphabet_of(sys), words[next_word]);
        }
      }
      oracle[n] = acc;
      if (oracle_word[n].empty() && n > 1) oracle_word[n] = oracle_word[n - 1];
    }
  } else if (is_fuzzy) {
    const auto& fl = std::get<FuzzyLts>(sys);
    QVal acc = q.top();
    std::size_t next_word = 0;
    for (int n = 1; n <= depth; ++n) {
      for (; next_word < words.size() &&
             static_cast<int>(words[next_word].size()) < n;
           ++next_word) {
        QVal a = QVal::interval(fuzzy_trace_value_oracle(fl, t1.memb, words[next_word]));
        QVal b = QVal::interval(fuzzy_trace_value_oracle(fl, t2.memb, words[next_word]));
        QVal d = q.hom(a, b);
        if (q.leq(d, acc)) {
          acc = d;
          oracle_word[n] = word_str(alphabet_of(sys), words[next_word]);
        }
      }
      oracle[n] = acc;
      if (oracle_word[n].empty() && n > 1) oracle_word[n] = oracle_word[n - 1];
    }
  } else if (std::holds_alternative<Lts>(sys)) {
    const auto& lts = std::get<Lts>(sys);
    for (int n = 1; n <= depth; ++n) {
      auto ta = trace_set_oracle(lts, t1.bits, n - 1);
      auto tb = trace_set_oracle(lts, t2.bits, n - 1);
      oracle[n] = QVal::boolean(ta == tb);
      if (!(ta == tb)) {
        std::vector<Word> diff;
        std::set_symmetric_difference(ta.begin(), ta.end(), tb.begin(), tb.end(),
                                      std::back_inserter(diff));
        oracle_word[n] = word_str(alphabet_of(sys), diff.front());
      }
    }
  } else {
    throw std::invalid_argument("linear checks need a machine-style system");
  }

  for (int n = 0; n <= depth; ++n) {
    HmDepthRecord rec;
    rec.depth = n;
    rec.logical = logical[n];
    rec.behaviour = behaviour[n];
    rec.oracle = oracle[n];
    rec.agree = rec.logical == rec.behaviour && rec.behaviour == rec.oracle;
    if (!rec.agree && rep.ok) {
      rep.ok = false;
      rep.fail_depth = n;
      rep.fail_word = oracle_word[n];
      for (std::size_t fi = 0; fi < formulas.size(); ++fi)
        if (static_cast<int>(formulas[fi].labels.size()) < n &&
            formula_dist[fi] == logical[n]) {
          rep.fail_formula = formula_str(sys, formulas[fi]);
          break;
        }
      rep.detail = "routes disagree at depth " + std::to_string(n) + ": logical " +
                   rec.logical.str() + ", behaviour " + rec.behaviour.str() + ", oracle " +
                   rec.oracle.str();
    }
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

// Boolean branching comparison: the conformance of the least logic fixpoint
// (diamond modality over the Boolean closure) against partition-refinement
// bisimilarity.
inline HmReport hm_check_boolean_branching(const UnlabelledTs& ts) {
  HmReport rep;
  rep.check = "boolean-branching";
  int n = static_cast<int>(ts.states.size());
  Quantale q{Instance::boolean};

  PredicateSetBool mu = boolean_logic_fixpoint(ts, {});
  std::vector<Predicate> preds;
  for (std::uint64_t h : mu) {
    Predicate p;
    for (int x = 0; x < n; ++x) p.push_back(QVal::boolean(h >> x & 1));
    preds.push_back(std::move(p));
  }
  Conformance logical = alpha(q, TcMode::symmetric, n, preds);
  Conformance behavioural = bisimilarity(System{ts});

  for (int i = 0; i < n && rep.ok; ++i)
    for (int j = 0; j < n && rep.ok; ++j)
      if (!(logical.at(i, j) == behavioural.at(i, j))) {
        rep.ok = false;
        rep.detail = "states " + ts.states[i] + "," + ts.states[j] + ": logical " +
                     logical.at(i, j).str() + " vs behavioural " + behavioural.at(i, j).str();
        for (std::uint64_t h : mu)
          if ((h >> i & 1) != (h >> j & 1)) {
            rep.detail += "; distinguishing predicate {";
            bool first = true;
            for (int x = 0; x < n; ++x)
              if (h >> x & 1) {
                rep.detail += (first ? "" : ",") + ts.states[x];
                first = false;
              }
            rep.detail += "}";
            break;
          }
      }
  HmDepthRecord rec;
  rec.agree = rep.ok;
  rec.logical = rec.behaviour = rec.oracle = QVal::boolean(rep.ok);
  rep.records.push_back(rec);
  return rep;
}

// Whether the two distribution liftings of a Boolean conformance coincide.
// The comparison only applies when d is fixed by the co-closure; otherwise
// there is nothing to check and the caller gets no verdict.
inline std::optional<bool> equivalent_liftings_check(const Conformance& d) {
  if (!(coclosure_boolean(d) == d)) return std::nullopt;
  Conformance unrestricted = kantorovich_definitional_boolean(d, false);
  Conformance restricted = kantorovich_definitional_boolean(d, true);
  return unrestricted == restricted;
}

}  // namespace qconf

#endif  // QCONF_HM_HPP
