#ifndef QCONF_LOGIC_HPP
#define QCONF_LOGIC_HPP

// Two formula languages: linear formulas (a chain of action modalities over
// an atom) evaluated through the determinized machine, and branching formulas
// (meets, constant scalings, modalities) evaluated on states. Plus the
// extensional Boolean logic-function step whose least fixpoint recovers
// bisimilarity.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qconf/conformance.hpp"
#include "qconf/quantale.hpp"
#include "qconf/system.hpp"

namespace qconf {

// Linear formulas are always [a1]...[an]atom; atom "1" on (fuzzy) transition
// systems, the payoff observation "*" on probabilistic ones.
struct EmFormula {
  Word labels;
  std::string atom = "1";

  bool operator==(const EmFormula& o) const = default;
};

struct BranchingFormula {
  enum class Kind { meet, tensor_const, hom_const, modal };
  Kind kind = Kind::meet;
  std::vector<BranchingFormula> subs;  // meet: any arity; others: exactly one
  Rat value;                           // tensor_const / hom_const scalar
  std::string modality;                // modal name: label, diamond, E, *
};

inline BranchingFormula branching_top() { return BranchingFormula{}; }

enum class Dialect { em, branching };
using Formula = std::variant<EmFormula, BranchingFormula>;

inline Instance instance_of(const System& sys) {
  if (std::holds_alternative<Lts>(sys) || std::holds_alternative<UnlabelledTs>(sys))
    return Instance::boolean;
  return Instance::interval;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("syntax error at position " + std::to_string(pos) + ": " + what);
  }
  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '*'))
      ++pos;
    if (pos == start) fail("expected an identifier");
    return text.substr(start, pos - start);
  }
  std::string rational_token() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
            text[pos] == '.' || text[pos] == '-'))
      ++pos;
    if (pos == start) fail("expected a rational literal");
    return text.substr(start, pos - start);
  }
  bool at_word(const std::string& w) {
    skip();
    return text.compare(pos, w.size(), w) == 0;
  }
};

// Surface form of a linear formula: labels by name, resolved later.
struct ParsedEm {
  std::vector<std::string> labels;
  std::string atom;
};

inline ParsedEm parse_em_names(Cursor& c) {
  ParsedEm out;
  while (true) {
    c.skip();
    if (c.eat('[')) {
      out.labels.push_back(c.ident());
      c.expect(']');
      continue;
    }
    out.atom = c.ident();
    if (out.atom != "1" && out.atom != "*") c.fail("atom must be '1' or '*'");
    return out;
  }
}

inline BranchingFormula parse_branching(Cursor& c) {
  c.skip();
  if (c.eat('[')) {
    BranchingFormula f;
    f.kind = BranchingFormula::Kind::modal;
    f.modality = c.ident();
    c.expect(']');
    f.subs.push_back(parse_branching(c));
    return f;
  }
  if (c.at_word("top")) {
    c.pos += 3;
    return branching_top();
  }
  if (c.at_word("meet(")) {
    c.pos += 5;
    BranchingFormula f;
    f.kind = BranchingFormula::Kind::meet;
    f.subs.push_back(parse_branching(c));
    while (c.eat(',')) f.subs.push_back(parse_branching(c));
    c.expect(')');
    return f;
  }
  if (c.at_word("tensor(")) {
    c.pos += 7;
    BranchingFormula f;
    f.kind = BranchingFormula::Kind::tensor_const;
    f.subs.push_back(parse_branching(c));
    c.expect(',');
    f.value = parse_rational(c.rational_token());
    c.expect(')');
    return f;
  }
  if (c.at_word("hom(")) {
    c.pos += 4;
    BranchingFormula f;
    f.kind = BranchingFormula::Kind::hom_const;
    f.value = parse_rational(c.rational_token());
    c.expect(',');
    f.subs.push_back(parse_branching(c));
    c.expect(')');
    return f;
  }
  c.fail("expected 'top', 'meet(', 'tensor(', 'hom(' or '[modality]'");
}

}  // namespace detail

// Parses either dialect; when `sys` is given, labels, atoms and modalities
// are checked against it (and linear labels are resolved to indices).
inline Formula parse_formula(const std::string& text, Dialect dialect,
                             const System* sys = nullptr) {
  detail::Cursor c{text};
  if (dialect == Dialect::branching) {
    BranchingFormula f = detail::parse_branching(c);
    c.skip();
    if (c.pos != text.size()) c.fail("trailing input");
    if (sys) {
      auto sigma = alphabet_of(*sys);
      auto check = [&](auto&& self, const BranchingFormula& g) -> void {
        if (g.kind == BranchingFormula::Kind::modal) {
          bool ok = false;
          if (std::holds_alternative<UnlabelledTs>(*sys)) ok = g.modality == "diamond";
          else if (std::holds_alternative<MarkovTerm>(*sys))
            ok = g.modality == "E" || g.modality == "*";
          else
            ok = std::find(sigma.begin(), sigma.end(), g.modality) != sigma.end();
          if (!ok) throw std::invalid_argument("unknown modality '" + g.modality + "'");
        }
        for (const BranchingFormula& s : g.subs) self(self, s);
      };
      check(check, f);
    }
    return f;
  }

  detail::ParsedEm raw = detail::parse_em_names(c);
  c.skip();
  if (c.pos != text.size()) c.fail("trailing input");
  EmFormula f;
  f.atom = raw.atom;
  if (!sys) {
    if (!raw.labels.empty())
      throw std::invalid_argument("linear formulas need a system to resolve labels");
    return f;
  }
  bool prob = std::holds_alternative<ProbAutomaton>(*sys);
  if (prob != (raw.atom == "*"))
    throw std::invalid_argument(prob ? "probabilistic formulas end in '*'"
                                     : "expected the constant '1'");
  for (const std::string& l : raw.labels) f.labels.push_back(label_index(*sys, l));
  return f;
}

inline std::string formula_str(const System& sys, const EmFormula& f) {
  auto sigma = alphabet_of(sys);
  std::string out;
  for (int a : f.labels) out += "[" + sigma.at(a) + "]";
  return out + f.atom;
}

inline std::string formula_str(const BranchingFormula& f) {
  using K = BranchingFormula::Kind;
  switch (f.kind) {
    case K::meet: {
      if (f.subs.empty()) return "top";
      std::string out = "meet(";
      for (std::size_t i = 0; i < f.subs.size(); ++i)
        out += (i ? "," : "") + formula_str(f.subs[i]);
      return out + ")";
    }
    case K::tensor_const:
      return "tensor(" + formula_str(f.subs[0]) + "," + format_rational(f.value) + ")";
    case K::hom_const:
      return "hom(" + format_rational(f.value) + "," + formula_str(f.subs[0]) + ")";
    case K::modal:
      return "[" + f.modality + "]" + formula_str(f.subs[0]);
  }
  return "";
}

// ---------------------------------------------------------------------------
// Linear evaluation

// Dense values of a linear formula at every state, built from the atom
// outwards through the modal chain.
inline std::vector<QVal> eval_em_all(const System& sys, const EmFormula& f) {
  int n = n_states(sys);
  Quantale q{instance_of(sys)};

  if (const auto* l = std::get_if<Lts>(&sys)) {
    if (f.atom != "1") throw std::invalid_argument("transition systems use the atom '1'");
    std::vector<bool> cur(n, true);
    for (auto it = f.labels.rbegin(); it != f.labels.rend(); ++it) {
      std::vector<bool> nxt(n, false);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n && !nxt[x]; ++y)
          if (l->succ[x][*it] >> y & 1) nxt[x] = cur[y];
      cur = std::move(nxt);
    }
    std::vector<QVal> out;
    for (bool b : cur) out.push_back(QVal::boolean(b));
    return out;
  }

  if (const auto* p = std::get_if<ProbAutomaton>(&sys)) {
    if (f.atom != "*") throw std::invalid_argument("probabilistic formulas use the atom '*'");
    std::vector<Rat> cur = p->payoff;
    for (auto it = f.labels.rbegin(); it != f.labels.rend(); ++it) {
      std::vector<Rat> nxt(n, Rat(0));
      for (int x = 0; x < n; ++x)
        for (const auto& [y, w] : p->trans[x][*it]) nxt[x] += w * cur[y];
      cur = std::move(nxt);
    }
    std::vector<QVal> out;
    for (const Rat& r : cur) out.push_back(QVal::interval(r));
    return out;
  }

  if (const auto* fl = std::get_if<FuzzyLts>(&sys)) {
    if (f.atom != "1") throw std::invalid_argument("fuzzy systems use the atom '1'");
    std::vector<Rat> cur(n, Rat(0));  // the constant 1 is the unit
    for (auto it = f.labels.rbegin(); it != f.labels.rend(); ++it) {
      std::vector<Rat> nxt(n, Rat(1));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Rat c = fl->weight[x][*it][y] + cur[y];
          if (c > 1) c = 1;
          if (c < nxt[x]) nxt[x] = c;
        }
      cur = std::move(nxt);
    }
    std::vector<QVal> out;
    for (const Rat& r : cur) out.push_back(QVal::interval(r));
    return out;
  }

  throw std::invalid_argument("linear formulas need a machine-style system");
}

inline QVal eval_em(const System& sys, const EmFormula& f, int x) {
  return eval_em_all(sys, f).at(x);
}

// o(T[[phi]](t)): join / expectation / tensored join over the element.
inline QVal eval_em_on_element(const System& sys, const EmFormula& f, const MonadElement& t) {
  if (t.kind != monad_of(sys)) throw std::invalid_argument("element does not match system monad");
  Quantale q{instance_of(sys)};
  std::vector<QVal> vals = eval_em_all(sys, f);
  switch (t.kind) {
    case Monad::subset: {
      QVal acc = q.bottom();
      for (int x = 0; x < static_cast<int>(vals.size()); ++x)
        if (t.bits >> x & 1) acc = q.join(acc, vals[x]);
      return acc;
    }
    case Monad::dist: {
      Rat acc(0);
      for (const auto& [x, w] : t.weights) acc += w * vals[x].rat();
      return QVal::interval(acc);
    }
    case Monad::fuzzy: {
      QVal acc = q.bottom();
      for (int x = 0; x < static_cast<int>(vals.size()); ++x)
        acc = q.join(acc, q.tensor(QVal::interval(t.memb[x]), vals[x]));
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Branching evaluation

inline QVal eval_branching(const System& sys, const BranchingFormula& f, int x) {
  Quantale q{instance_of(sys)};
  auto scalar = [&](const Rat& r) {
    if (q.inst == Instance::boolean) {
      if (r != 0 && r != 1) throw std::invalid_argument("Boolean constants must be 0 or 1");
      return QVal::boolean(r == 1);
    }
    return QVal::interval(r);
  };
  using K = BranchingFormula::Kind;
  switch (f.kind) {
    case K::meet: {
      QVal acc = q.top();
      for (const BranchingFormula& s : f.subs) acc = q.meet(acc, eval_branching(sys, s, x));
      return acc;
    }
    case K::tensor_const:
      return q.tensor(eval_branching(sys, f.subs[0], x), scalar(f.value));
    case K::hom_const:
      return q.hom(scalar(f.value), eval_branching(sys, f.subs[0], x));
    case K::modal:
      break;
  }

  const BranchingFormula& sub = f.subs[0];
  if (const auto* u = std::get_if<UnlabelledTs>(&sys)) {
    if (f.modality != "diamond") throw std::invalid_argument("unknown modality '" + f.modality + "'");
    QVal acc = q.bottom();
    for (int y = 0; y < static_cast<int>(u->states.size()); ++y)
      if (u->succ[x] >> y & 1) acc = q.join(acc, eval_branching(sys, sub, y));
    return acc;
  }
  if (const auto* m = std::get_if<MarkovTerm>(&sys)) {
    if (f.modality == "*") return m->step[x] ? q.bottom() : q.unit();
    if (f.modality != "E") throw std::invalid_argument("unknown modality '" + f.modality + "'");
    if (!m->step[x]) return q.bottom();
    Rat acc(0);
    for (const auto& [y, w] : *m->step[x]) acc += w * eval_branching(sys, sub, y).rat();
    return QVal::interval(acc);
  }
  if (const auto* l = std::get_if<Lts>(&sys)) {
    int a = label_index(sys, f.modality);
    QVal acc = q.bottom();
    for (int y = 0; y < static_cast<int>(l->states.size()); ++y)
      if (l->succ[x][a] >> y & 1) acc = q.join(acc, eval_branching(sys, sub, y));
    return acc;
  }
  if (const auto* fl = std::get_if<FuzzyLts>(&sys)) {
    int a = label_index(sys, f.modality);
    QVal acc = q.bottom();
    for (int y = 0; y < static_cast<int>(fl->states.size()); ++y)
      acc = q.join(acc, q.tensor(QVal::interval(fl->weight[x][a][y]),
                                 eval_branching(sys, sub, y)));
    return acc;
  }
  throw std::invalid_argument("branching modalities are undefined for this system");
}

// ---------------------------------------------------------------------------
// Formula enumeration

// All linear formulas of modal depth <= depth: by depth, then lexicographic
// in declared label order.
inline std::vector<EmFormula> enumerate_em_formulas(const System& sys, int depth) {
  int k = static_cast<int>(alphabet_of(sys).size());
  std::string atom = std::holds_alternative<ProbAutomaton>(sys) ? "*" : "1";
  std::vector<EmFormula> out{{Word{}, atom}};
  std::vector<Word> level{{}};
  for (int d = 1; d <= depth; ++d) {
    std::vector<Word> next;
    for (const Word& w : level)
      for (int a = 0; a < k; ++a) {
        Word ext = w;
        ext.push_back(a);
        next.push_back(ext);
        out.push_back({ext, atom});
      }
    level = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extensional Boolean logic-function step

// Predicates over states as bitmasks.
using PredicateSetBool = std::set<std::uint64_t>;

// Closure under all Boolean operators = every predicate constant on the
// blocks of the partition induced by S; then one diamond-modal layer along
// the transition structure; then the declared constants.
inline PredicateSetBool boolean_logic_step(const UnlabelledTs& ts, const PredicateSetBool& s,
                                           const PredicateSetBool& theta) {
  int n = static_cast<int>(ts.states.size());
  if (n > kEnumerationBound)
    throw std::invalid_argument("extensional logic step is bounded at " +
                                std::to_string(kEnumerationBound) + " states");
  // partition induced by S
  std::map<std::vector<bool>, std::uint64_t> blocks;
  for (int x = 0; x < n; ++x) {
    std::vector<bool> profile;
    for (std::uint64_t h : s) profile.push_back(h >> x & 1);
    blocks[profile] |= std::uint64_t{1} << x;
  }
  std::vector<std::uint64_t> block_masks;
  for (const auto& [profile, mask] : blocks) block_masks.push_back(mask);

  PredicateSetBool out = theta;
  int b = static_cast<int>(block_masks.size());
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << b); ++pick) {
    std::uint64_t h = 0;
    for (int i = 0; i < b; ++i)
      if (pick >> i & 1) h |= block_masks[i];
    // diamond image along the transitions
    std::uint64_t dh = 0;
    for (int x = 0; x < n; ++x)
      if (ts.succ[x] & h) dh |= std::uint64_t{1} << x;
    out.insert(dh);
  }
  return out;
}

// Least fixpoint of the step from the empty set. The step is monotone in S,
// so the iterates form an increasing chain inside a finite universe and
// equality is reached.
inline PredicateSetBool boolean_logic_fixpoint(const UnlabelledTs& ts,
                                               const PredicateSetBool& theta) {
  PredicateSetBool cur;
  while (true) {
    PredicateSetBool next = boolean_logic_step(ts, cur, theta);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

}  // namespace qconf

#endif  // QCONF_LOGIC_HPP
