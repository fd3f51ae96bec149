#ifndef QCONF_SYSTEM_HPP
#define QCONF_SYSTEM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qconf/quantale.hpp"
#include "qconf/rational.hpp"

namespace qconf {

using Json = nlohmann::json;

// Sparse rational distribution over state indices: sorted, positive entries,
// weights sum to 1.
using DistVec = std::vector<std::pair<int, Rat>>;

// Subsets of states are bitmasks; systems whose monad is a powerset are
// capped at 64 states.
inline constexpr int kMaxSubsetStates = 64;

struct Lts {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::uint64_t>> succ;  // [state][label] -> bitset
};

struct UnlabelledTs {
  std::vector<std::string> states;
  std::vector<std::uint64_t> succ;  // [state] -> bitset
};

struct ProbAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::vector<DistVec>> trans;  // [state][label] -> distribution
  std::vector<Rat> payoff;                  // values in [0,1]
};

struct FuzzyLts {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  // weight[x][a][y] is a quantale value in [0,1]; the quantale zero (real 1)
  // means "no edge". The unit (real 0) is the strongest possible edge.
  std::vector<std::vector<std::vector<Rat>>> weight;
};

struct MarkovTerm {
  std::vector<std::string> states;
  std::vector<std::optional<DistVec>> step;  // nullopt = terminal mark
};

using System = std::variant<Lts, UnlabelledTs, ProbAutomaton, FuzzyLts, MarkovTerm>;

inline const std::vector<std::string>& state_names(const System& sys) {
  return std::visit([](const auto& s) -> const std::vector<std::string>& { return s.states; },
                    sys);
}

inline int n_states(const System& sys) { return static_cast<int>(state_names(sys).size()); }

inline std::vector<std::string> alphabet_of(const System& sys) {
  if (const auto* l = std::get_if<Lts>(&sys)) return l->alphabet;
  if (const auto* p = std::get_if<ProbAutomaton>(&sys)) return p->alphabet;
  if (const auto* f = std::get_if<FuzzyLts>(&sys)) return f->alphabet;
  return {};
}

inline int state_index(const System& sys, const std::string& name) {
  const auto& names = state_names(sys);
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown state '" + name + "'");
  return static_cast<int>(it - names.begin());
}

inline int label_index(const System& sys, const std::string& label) {
  auto sigma = alphabet_of(sys);
  auto it = std::find(sigma.begin(), sigma.end(), label);
  if (it == sigma.end()) throw std::invalid_argument("unknown label '" + label + "'");
  return static_cast<int>(it - sigma.begin());
}

// ---------------------------------------------------------------------------
// Monad elements

enum class Monad { subset, dist, fuzzy };

// An element of TX in canonical form, suitable as an interning key.
struct MonadElement {
  Monad kind = Monad::subset;
  std::uint64_t bits = 0;        // subset
  DistVec weights;               // dist
  std::vector<Rat> memb;         // fuzzy, dense; real 1 = quantale zero

  bool operator==(const MonadElement& o) const {
    return kind == o.kind && bits == o.bits && weights == o.weights && memb == o.memb;
  }
  bool operator<(const MonadElement& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (bits != o.bits) return bits < o.bits;
    if (weights != o.weights) return weights < o.weights;
    return memb < o.memb;
  }
};

inline MonadElement subset_element(std::uint64_t bits) {
  MonadElement e;
  e.kind = Monad::subset;
  e.bits = bits;
  return e;
}

// Sorts, merges duplicate indices, drops zero weights, and validates that the
// weights sum to exactly 1.
inline MonadElement dist_element(DistVec entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  DistVec merged;
  Rat total(0);
  for (auto& [i, w] : entries) {
    if (w < 0) throw std::invalid_argument("negative distribution weight");
    if (w == 0) continue;
    total += w;
    if (!merged.empty() && merged.back().first == i)
      merged.back().second += w;
    else
      merged.emplace_back(i, w);
  }
  if (total != 1)
    throw std::invalid_argument("distribution weights sum to " + format_rational(total) +
                                ", expected 1");
  MonadElement e;
  e.kind = Monad::dist;
  e.weights = std::move(merged);
  return e;
}

inline MonadElement fuzzy_element(std::vector<Rat> memb) {
  for (const Rat& v : memb)
    if (v < 0 || v > 1)
      throw std::invalid_argument("fuzzy membership outside [0,1]: " + format_rational(v));
  MonadElement e;
  e.kind = Monad::fuzzy;
  e.memb = std::move(memb);
  return e;
}

inline Monad monad_of(const System& sys) {
  if (std::holds_alternative<ProbAutomaton>(sys)) return Monad::dist;
  if (std::holds_alternative<FuzzyLts>(sys)) return Monad::fuzzy;
  if (std::holds_alternative<MarkovTerm>(sys))
    throw std::invalid_argument("markov-term systems have no determinized element type");
  return Monad::subset;
}

// eta at x: singleton / Dirac / fuzzy point mass (unit at x, zero elsewhere).
inline MonadElement unit_element(const System& sys, int x) {
  int n = n_states(sys);
  if (x < 0 || x >= n) throw std::out_of_range("unit_element: state index out of range");
  switch (monad_of(sys)) {
    case Monad::subset:
      return subset_element(std::uint64_t{1} << x);
    case Monad::dist:
      return dist_element({{x, Rat(1)}});
    case Monad::fuzzy: {
      std::vector<Rat> memb(n, Rat(1));
      memb[x] = Rat(0);
      return fuzzy_element(std::move(memb));
    }
  }
  throw std::logic_error("unreachable");
}

// CLI/display form: {s0,s2} / {s0:1/2,s1:1/2} / {s0:3/4}; states at the
// monad's zero are omitted, so "{}" is the empty subset / empty fuzzy subset.
inline std::string element_str(const System& sys, const MonadElement& e) {
  const auto& names = state_names(sys);
  std::string out = "{";
  bool first = true;
  auto add = [&](const std::string& item) {
    if (!first) out += ",";
    out += item;
    first = false;
  };
  switch (e.kind) {
    case Monad::subset:
      for (int i = 0; i < static_cast<int>(names.size()); ++i)
        if (e.bits >> i & 1) add(names[i]);
      break;
    case Monad::dist:
      for (const auto& [i, w] : e.weights) add(names[i] + ":" + format_rational(w));
      break;
    case Monad::fuzzy:
      for (int i = 0; i < static_cast<int>(e.memb.size()); ++i)
        if (e.memb[i] != 1) add(names[i] + ":" + format_rational(e.memb[i]));
      break;
  }
  return out + "}";
}

inline MonadElement parse_element(const System& sys, const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw std::invalid_argument("element must be of the form {..}: '" + text + "'");
  std::string body = s.substr(1, s.size() - 2);

  std::vector<std::pair<std::string, std::optional<std::string>>> items;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (item.empty()) throw std::invalid_argument("empty item in element '" + text + "'");
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      items.emplace_back(item, std::nullopt);
    else
      items.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  Monad m = monad_of(sys);
  int n = n_states(sys);
  if (m == Monad::subset) {
    std::uint64_t bits = 0;
    for (const auto& [name, val] : items) {
      if (val) throw std::invalid_argument("subset elements take no weights: '" + text + "'");
      bits |= std::uint64_t{1} << state_index(sys, name);
    }
    return subset_element(bits);
  }
  if (m == Monad::dist) {
    DistVec entries;
    for (const auto& [name, val] : items) {
      if (!val) throw std::invalid_argument("distribution entries need weights: '" + text + "'");
      entries.emplace_back(state_index(sys, name), parse_rational(*val));
    }
    return dist_element(std::move(entries));
  }
  std::vector<Rat> memb(n, Rat(1));
  for (const auto& [name, val] : items) {
    if (!val) throw std::invalid_argument("fuzzy entries need values: '" + text + "'");
    memb[state_index(sys, name)] = parse_rational(*val);
  }
  return fuzzy_element(std::move(memb));
}

// A word is a sequence of label indices. Rendered with no separator when all
// labels are single characters, with '.' otherwise; the empty word prints as
// the Greek epsilon.
using Word = std::vector<int>;

inline std::string word_str(const std::vector<std::string>& sigma, const Word& w) {
  if (w.empty()) return "ε";
  bool compact = std::all_of(sigma.begin(), sigma.end(),
                             [](const std::string& l) { return l.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !compact) out += '.';
    out += sigma.at(w[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON schema

namespace detail {

inline void require_fields(const Json& doc, const std::vector<std::string>& required,
                           const std::vector<std::string>& optional) {
  for (const std::string& f : required)
    if (!doc.contains(f)) throw std::invalid_argument("missing field \"" + f + "\"");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      throw std::invalid_argument("unknown field \"" + k + "\"");
  }
}

inline std::vector<std::string> name_list(const Json& arr, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const Json& v : arr) {
    if (!v.is_string()) throw std::invalid_argument(std::string(what) + " entries must be strings");
    std::string name = v.get<std::string>();
    if (std::find(out.begin(), out.end(), name) != out.end())
      throw std::invalid_argument(std::string("duplicate ") + what + " entry '" + name + "'");
    out.push_back(std::move(name));
  }
  return out;
}

inline int index_of(const std::vector<std::string>& names, const std::string& name,
                    const char* what, const std::string& where) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw std::invalid_argument("unknown " + std::string(what) + " '" + name + "' in " + where);
  return static_cast<int>(it - names.begin());
}

inline Rat unit_rational(const Json& v, const std::string& where) {
  if (!v.is_string())
    throw std::invalid_argument("rational in " + where + " must be a string literal");
  Rat r = parse_rational(v.get<std::string>());
  if (r < 0 || r > 1)
    throw std::invalid_argument("value " + format_rational(r) + " outside [0,1] in " + where);
  return r;
}

inline DistVec dist_from_json(const Json& obj, const std::vector<std::string>& states,
                              const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("\"dist\" must be an object in " + where);
  DistVec entries;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    entries.emplace_back(index_of(states, it.key(), "state", where),
                         unit_rational(it.value(), where));
  Rat total(0);
  for (auto& [i, w] : entries) total += w;
  if (total != 1)
    throw std::invalid_argument("distribution in " + where + " sums to " +
                                format_rational(total) + ", expected 1");
  return dist_element(std::move(entries)).weights;
}

}  // namespace detail

inline System parse_system(const Json& doc) {
  using detail::index_of;
  using detail::name_list;
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string())
    throw std::invalid_argument("system document needs a \"type\" field");
  std::string type = doc["type"].get<std::string>();
  std::vector<std::string> states = name_list(doc.at("states"), "states");
  int n = static_cast<int>(states.size());
  if (n == 0) throw std::invalid_argument("a system needs at least one state");

  auto transition_list = [&]() -> const Json& {
    static const Json empty = Json::array();
    if (!doc.contains("transitions")) return empty;
    if (!doc["transitions"].is_array())
      throw std::invalid_argument("\"transitions\" must be an array");
    return doc["transitions"];
  };

  if (type == "lts" || type == "unlabelled") {
    if (n > kMaxSubsetStates)
      throw std::invalid_argument("state count exceeds the subset limit of 64");
    if (type == "lts") {
      detail::require_fields(doc, {"type", "states", "alphabet"}, {"transitions"});
      Lts sys{states, name_list(doc["alphabet"], "alphabet"), {}};
      sys.succ.assign(n, std::vector<std::uint64_t>(sys.alphabet.size(), 0));
      int tix = 0;
      for (const Json& t : transition_list()) {
        std::string where = "transitions[" + std::to_string(tix++) + "]";
        detail::require_fields(t, {"from", "label", "to"}, {});
        int from = index_of(states, t["from"].get<std::string>(), "state", where);
        int lab = index_of(sys.alphabet, t["label"].get<std::string>(), "label", where);
        int to = index_of(states, t["to"].get<std::string>(), "state", where);
        sys.succ[from][lab] |= std::uint64_t{1} << to;  // duplicates merge
      }
      return sys;
    }
    detail::require_fields(doc, {"type", "states"}, {"transitions"});
    UnlabelledTs sys{states, std::vector<std::uint64_t>(n, 0)};
    int tix = 0;
    for (const Json& t : transition_list()) {
      std::string where = "transitions[" + std::to_string(tix++) + "]";
      detail::require_fields(t, {"from", "to"}, {});
      int from = index_of(states, t["from"].get<std::string>(), "state", where);
      int to = index_of(states, t["to"].get<std::string>(), "state", where);
      sys.succ[from] |= std::uint64_t{1} << to;
    }
    return sys;
  }

  if (type == "prob-automaton") {
    detail::require_fields(doc, {"type", "states", "alphabet"}, {"transitions", "payoffs"});
    ProbAutomaton sys{states, name_list(doc["alphabet"], "alphabet"), {}, {}};
    int k = static_cast<int>(sys.alphabet.size());
    sys.trans.assign(n, std::vector<DistVec>(k));
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(k, false));
    int tix = 0;
    for (const Json& t : transition_list()) {
      std::string where = "transitions[" + std::to_string(tix++) + "]";
      detail::require_fields(t, {"from", "label", "dist"}, {});
      int from = index_of(states, t["from"].get<std::string>(), "state", where);
      int lab = index_of(sys.alphabet, t["label"].get<std::string>(), "label", where);
      if (seen[from][lab])
        throw std::invalid_argument("duplicate distribution for (" +
                                    states[from] + ", " + sys.alphabet[lab] + ")");
      seen[from][lab] = true;
      sys.trans[from][lab] = detail::dist_from_json(t["dist"], states, where);
    }
    for (int x = 0; x < n; ++x)
      for (int a = 0; a < k; ++a)
        if (!seen[x][a])
          throw std::invalid_argument("state '" + states[x] + "' has no distribution for label '" +
                                      sys.alphabet[a] + "' (automaton must be total)");
    sys.payoff.assign(n, Rat(0));
    if (doc.contains("payoffs")) {
      if (!doc["payoffs"].is_object())
        throw std::invalid_argument("\"payoffs\" must be an object");
      for (auto it = doc["payoffs"].begin(); it != doc["payoffs"].end(); ++it)
        sys.payoff[index_of(states, it.key(), "state", "payoffs")] =
            detail::unit_rational(it.value(), "payoffs");
    }
    return sys;
  }

  if (type == "fuzzy-lts") {
    detail::require_fields(doc, {"type", "states", "alphabet"}, {"transitions"});
    FuzzyLts sys{states, name_list(doc["alphabet"], "alphabet"), {}};
    int k = static_cast<int>(sys.alphabet.size());
    sys.weight.assign(n, std::vector<std::vector<Rat>>(k, std::vector<Rat>(n, Rat(1))));
    std::vector<std::vector<std::vector<bool>>> seen(
        n, std::vector<std::vector<bool>>(k, std::vector<bool>(n, false)));
    int tix = 0;
    for (const Json& t : transition_list()) {
      std::string where = "transitions[" + std::to_string(tix++) + "]";
      detail::require_fields(t, {"from", "label", "to", "weight"}, {});
      int from = index_of(states, t["from"].get<std::string>(), "state", where);
      int lab = index_of(sys.alphabet, t["label"].get<std::string>(), "label", where);
      int to = index_of(states, t["to"].get<std::string>(), "state", where);
      if (seen[from][lab][to])
        throw std::invalid_argument("duplicate fuzzy weight in " + where);
      seen[from][lab][to] = true;
      sys.weight[from][lab][to] = detail::unit_rational(t["weight"], where);
    }
    return sys;
  }

  if (type == "markov-term") {
    detail::require_fields(doc, {"type", "states"}, {"transitions", "terminal"});
    MarkovTerm sys{states, std::vector<std::optional<DistVec>>(n)};
    std::vector<bool> terminal(n, false);
    if (doc.contains("terminal"))
      for (const std::string& name : name_list(doc["terminal"], "terminal"))
        terminal[index_of(states, name, "state", "terminal")] = true;
    int tix = 0;
    for (const Json& t : transition_list()) {
      std::string where = "transitions[" + std::to_string(tix++) + "]";
      detail::require_fields(t, {"from", "dist"}, {});
      int from = index_of(states, t["from"].get<std::string>(), "state", where);
      if (terminal[from])
        throw std::invalid_argument("state '" + states[from] + "' is both terminal and stepping");
      if (sys.step[from])
        throw std::invalid_argument("duplicate distribution for state '" + states[from] + "'");
      sys.step[from] = detail::dist_from_json(t["dist"], states, where);
    }
    for (int x = 0; x < n; ++x)
      if (!terminal[x] && !sys.step[x])
        throw std::invalid_argument("state '" + states[x] +
                                    "' must be terminal or carry a distribution");
    return sys;
  }

  throw std::invalid_argument("unknown system type \"" + type + "\"");
}

inline Json serialize_system(const System& sys) {
  Json doc;
  doc["states"] = state_names(sys);
  auto dist_json = [&](const DistVec& d) {
    Json obj = Json::object();
    for (const auto& [i, w] : d) obj[state_names(sys)[i]] = format_rational(w);
    return obj;
  };

  if (const auto* l = std::get_if<Lts>(&sys)) {
    doc["type"] = "lts";
    doc["alphabet"] = l->alphabet;
    Json ts = Json::array();
    for (std::size_t x = 0; x < l->succ.size(); ++x)
      for (std::size_t a = 0; a < l->alphabet.size(); ++a)
        for (int y = 0; y < static_cast<int>(l->states.size()); ++y)
          if (l->succ[x][a] >> y & 1)
            ts.push_back({{"from", l->states[x]}, {"label", l->alphabet[a]}, {"to", l->states[y]}});
    doc["transitions"] = std::move(ts);
  } else if (const auto* u = std::get_if<UnlabelledTs>(&sys)) {
    doc["type"] = "unlabelled";
    Json ts = Json::array();
    for (std::size_t x = 0; x < u->succ.size(); ++x)
      for (int y = 0; y < static_cast<int>(u->states.size()); ++y)
        if (u->succ[x] >> y & 1)
          ts.push_back({{"from", u->states[x]}, {"to", u->states[y]}});
    doc["transitions"] = std::move(ts);
  } else if (const auto* p = std::get_if<ProbAutomaton>(&sys)) {
    doc["type"] = "prob-automaton";
    doc["alphabet"] = p->alphabet;
    Json ts = Json::array();
    for (std::size_t x = 0; x < p->trans.size(); ++x)
      for (std::size_t a = 0; a < p->alphabet.size(); ++a)
        ts.push_back({{"from", p->states[x]},
                      {"label", p->alphabet[a]},
                      {"dist", dist_json(p->trans[x][a])}});
    doc["transitions"] = std::move(ts);
    Json payoffs = Json::object();
    for (std::size_t x = 0; x < p->states.size(); ++x)
      payoffs[p->states[x]] = format_rational(p->payoff[x]);
    doc["payoffs"] = std::move(payoffs);
  } else if (const auto* f = std::get_if<FuzzyLts>(&sys)) {
    doc["type"] = "fuzzy-lts";
    doc["alphabet"] = f->alphabet;
    Json ts = Json::array();
    for (std::size_t x = 0; x < f->weight.size(); ++x)
      for (std::size_t a = 0; a < f->alphabet.size(); ++a)
        for (int y = 0; y < static_cast<int>(f->states.size()); ++y)
          if (f->weight[x][a][y] != 1)
            ts.push_back({{"from", f->states[x]},
                          {"label", f->alphabet[a]},
                          {"to", f->states[y]},
                          {"weight", format_rational(f->weight[x][a][y])}});
    doc["transitions"] = std::move(ts);
  } else {
    const auto& m = std::get<MarkovTerm>(sys);
    doc["type"] = "markov-term";
    Json ts = Json::array();
    Json terminal = Json::array();
    for (std::size_t x = 0; x < m.states.size(); ++x) {
      if (m.step[x])
        ts.push_back({{"from", m.states[x]}, {"dist", dist_json(*m.step[x])}});
      else
        terminal.push_back(m.states[x]);
    }
    doc["transitions"] = std::move(ts);
    doc["terminal"] = std::move(terminal);
  }
  return doc;
}

}  // namespace qconf

#endif  // QCONF_SYSTEM_HPP
