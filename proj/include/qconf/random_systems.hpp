#ifndef QCONF_RANDOM_SYSTEMS_HPP
#define QCONF_RANDOM_SYSTEMS_HPP

// Seeded generators for desk-scale property runs. Everything is a pure
// function of the generator state, so a recorded seed reproduces the run.

#include <random>
#include <string>
#include <vector>

#include "qconf/checks.hpp"
#include "qconf/logic.hpp"
#include "qconf/system.hpp"

namespace qconf {

inline Lts random_lts(std::mt19937_64& rng, int max_states, int max_labels) {
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

inline UnlabelledTs random_uts(std::mt19937_64& rng, int max_states) {
  UnlabelledTs ts;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  for (int i = 0; i < n; ++i) ts.states.push_back("u" + std::to_string(i));
  for (int x = 0; x < n; ++x) ts.succ.push_back(rng() % (std::uint64_t{1} << n));
  return ts;
}

// A distribution with small exact weights (integer numerators over a small
// common denominator).
inline DistVec random_dist(std::mt19937_64& rng, int n) {
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

inline ProbAutomaton random_pa(std::mt19937_64& rng, int max_states, int max_labels) {
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

inline FuzzyLts random_fuzzy(std::mt19937_64& rng, int max_states, int max_labels) {
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

inline MarkovTerm random_markov(std::mt19937_64& rng, int max_states) {
  MarkovTerm mt;
  int n = 2 + static_cast<int>(rng() % (max_states - 1));
  for (int i = 0; i < n; ++i) mt.states.push_back("m" + std::to_string(i));
  mt.step.assign(n, std::nullopt);
  for (int x = 0; x < n; ++x)
    if (rng() % 4) mt.step[x] = random_dist(rng, n);
  bool any_terminal = false;
  for (int x = 0; x < n; ++x) any_terminal |= !mt.step[x].has_value();
  if (!any_terminal) mt.step[static_cast<int>(rng() % n)] = std::nullopt;
  return mt;
}

// An element of the system's monad: a subset, a distribution, or a fuzzy
// membership vector.
inline MonadElement random_element(std::mt19937_64& rng, const System& sys) {
  int n = n_states(sys);
  switch (monad_of(sys)) {
    case Monad::subset:
      return subset_element(rng() % (std::uint64_t{1} << n));
    case Monad::dist:
      return dist_element(random_dist(rng, n));
    case Monad::fuzzy: {
      std::vector<Rat> memb;
      for (int x = 0; x < n; ++x) memb.push_back(random_unit_rational(rng, 6));
      return fuzzy_element(memb);
    }
  }
  throw std::logic_error("unreachable");
}

// Random branching formula over the system's modalities.
inline BranchingFormula random_branching_formula(std::mt19937_64& rng, const System& sys,
                                                 int depth) {
  std::vector<std::string> mods;
  if (std::holds_alternative<UnlabelledTs>(sys)) mods = {"diamond"};
  else if (std::holds_alternative<MarkovTerm>(sys)) mods = {"E", "*"};
  else
    mods = alphabet_of(sys);
  Instance inst = instance_of(sys);
  auto scalar = [&]() {
    return inst == Instance::boolean ? Rat(rng() % 2) : random_unit_rational(rng, 6);
  };
  BranchingFormula f;
  switch (depth == 0 ? 0 : rng() % 4) {
    case 0: {
      f.kind = BranchingFormula::Kind::meet;
      if (depth > 0)
        for (std::uint64_t i = rng() % 3; i > 0; --i)
          f.subs.push_back(random_branching_formula(rng, sys, depth - 1));
      return f;
    }
    case 1:
      f.kind = BranchingFormula::Kind::tensor_const;
      f.subs.push_back(random_branching_formula(rng, sys, depth - 1));
      f.value = scalar();
      return f;
    case 2:
      f.kind = BranchingFormula::Kind::hom_const;
      f.value = scalar();
      f.subs.push_back(random_branching_formula(rng, sys, depth - 1));
      return f;
    default:
      f.kind = BranchingFormula::Kind::modal;
      f.modality = mods[rng() % mods.size()];
      f.subs.push_back(random_branching_formula(rng, sys, depth - 1));
      return f;
  }
}

}  // namespace qconf

#endif  // QCONF_RANDOM_SYSTEMS_HPP
