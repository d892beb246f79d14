#pragma once

// Deterministic behaviours and the queries shared by every determinized
// coalgebra: running words, bounded reachability, bisimulation up-to and the
// solution of flat equation systems.

#include "gpc/alphabet.hpp"
#include "gpc/semiring.hpp"

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gpc {

/// A lazily unfolded deterministic Moore system. States are values with a
/// canonical form, so `operator<`/`operator==` decide state identity.
template <class State, class Output>
struct DetBehavior {
  AlphabetPtr alphabet;
  std::function<Output(const State&)> output;
  std::function<State(const State&, Symbol)> step;
  std::function<std::string(const State&)> show;
};

template <class State, class Output>
State step_word(const DetBehavior<State, Output>& b, State q, const Word& w) {
  for (Symbol a : w) {
    if (a >= b.alphabet->size()) throw AlphabetError("letter outside the input alphabet");
    q = b.step(q, a);
  }
  return q;
}

template <class State, class Output>
Output run_word(const DetBehavior<State, Output>& b, const State& q0, const Word& w) {
  return b.output(step_word(b, q0, w));
}

template <class State>
struct Reachable {
  std::vector<State> states;  // breadth-first discovery order
  bool complete = true;
};

/// Breadth-first closure of {q0}, cut off once it would exceed `max_states`.
template <class State, class Output>
Reachable<State> enumerate_reachable(const DetBehavior<State, Output>& b, const State& q0,
                                     std::size_t max_states) {
  if (max_states == 0) throw std::invalid_argument("max_states must be at least 1");
  Reachable<State> r;
  std::set<State> seen{q0};
  r.states.push_back(q0);
  for (std::size_t head = 0; head < r.states.size(); ++head) {
    const State q = r.states[head];
    for (Symbol a = 0; a < b.alphabet->size(); ++a) {
      State n = b.step(q, a);
      if (seen.count(n)) continue;
      if (seen.size() == max_states) {
        r.complete = false;
        return r;
      }
      seen.insert(n);
      r.states.push_back(std::move(n));
    }
  }
  return r;
}

struct EquivVerdict {
  enum class Kind { equivalent, distinguished };
  Kind kind = Kind::equivalent;
  bool exact = false;          // the explored relation closed up
  std::size_t depth = 0;       // exploration bound that was requested
  std::size_t relation_size = 0;
  Word witness;                // set when distinguished

  bool equivalent() const { return kind == Kind::equivalent; }
};

template <class S1, class S2>
using ClosureHook =
    std::function<bool(const std::vector<std::pair<S1, S2>>& relation, const S1&, const S2&)>;

namespace detail {

// Plain pair BFS with exact-repeat pruning; the first mismatch it meets is the
// length-lexicographically least distinguishing word.
template <class S1, class S2, class Out>
std::optional<Word> least_witness(const DetBehavior<S1, Out>& b1, const S1& q1,
                                  const DetBehavior<S2, Out>& b2, const S2& q2,
                                  std::size_t max_len) {
  struct Item {
    S1 s1;
    S2 s2;
    Word w;
  };
  std::set<std::pair<S1, S2>> seen{{q1, q2}};
  std::deque<Item> queue{{q1, q2, {}}};
  while (!queue.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    if (!(b1.output(it.s1) == b2.output(it.s2))) return it.w;
    if (it.w.size() == max_len) continue;
    for (Symbol a = 0; a < b1.alphabet->size(); ++a) {
      S1 n1 = b1.step(it.s1, a);
      S2 n2 = b2.step(it.s2, a);
      if (!seen.insert({n1, n2}).second) continue;
      Word w = it.w;
      w.push_back(a);
      queue.push_back({std::move(n1), std::move(n2), std::move(w)});
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Pair exploration up to `depth` letters. A pair is dropped when it repeats
/// or when `closure` says it already lies in the closure of the explored
/// relation. On mismatch the least witness is recomputed without the closure.
template <class S1, class S2, class Out>
EquivVerdict bounded_bisim(const DetBehavior<S1, Out>& b1, const S1& q1,
                           const DetBehavior<S2, Out>& b2, const S2& q2, std::size_t depth,
                           const ClosureHook<S1, S2>& closure = {}) {
  if (!same_alphabet(b1.alphabet, b2.alphabet))
    throw TypeError("behaviours over different input alphabets");
  struct Item {
    S1 s1;
    S2 s2;
    std::size_t len;
  };
  EquivVerdict v;
  v.depth = depth;
  std::vector<std::pair<S1, S2>> relation;
  std::set<std::pair<S1, S2>> seen;
  std::deque<Item> queue{{q1, q2, 0}};
  bool frontier = false;
  while (!queue.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    if (seen.count({it.s1, it.s2})) continue;
    if (closure && closure(relation, it.s1, it.s2)) continue;
    if (!(b1.output(it.s1) == b2.output(it.s2))) {
      v.kind = EquivVerdict::Kind::distinguished;
      v.witness = *detail::least_witness(b1, q1, b2, q2, it.len);
      v.relation_size = relation.size();
      return v;
    }
    seen.insert({it.s1, it.s2});
    relation.emplace_back(it.s1, it.s2);
    if (it.len == depth) {
      frontier = true;
      continue;
    }
    for (Symbol a = 0; a < b1.alphabet->size(); ++a)
      queue.push_back({b1.step(it.s1, a), b2.step(it.s2, a), it.len + 1});
  }
  v.kind = EquivVerdict::Kind::equivalent;
  v.exact = !frontier;
  v.relation_size = relation.size();
  return v;
}

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite system X -> H X + A: each variable either emits an output and
/// steps to other variables, or stands for a state of an imported behaviour.
template <class Out>
struct FlatEquation {
  struct Guarded {
    Out out;
    std::vector<std::size_t> succ;  // indexed by letter
  };
  struct Imported {
    std::string handle;
  };

  AlphabetPtr alphabet;
  std::vector<std::string> vars;
  std::vector<std::variant<Guarded, Imported>> rhs;

  std::size_t var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return i;
    throw ResolutionError("unknown variable '" + name + "'");
  }
};

/// State of a solved system: a guarded variable or a state of the imports.
template <class ImportState>
struct SolState {
  std::variant<std::size_t, ImportState> v;

  static SolState of_var(std::size_t x) { return {std::variant<std::size_t, ImportState>(std::in_place_index<0>, x)}; }
  static SolState of_import(ImportState q) {
    return {std::variant<std::size_t, ImportState>(std::in_place_index<1>, std::move(q))};
  }

  bool is_var() const { return v.index() == 0; }
  std::size_t var() const { return std::get<0>(v); }
  const ImportState& imported() const { return std::get<1>(v); }

  friend bool operator==(const SolState& a, const SolState& b) { return a.v == b.v; }
  friend bool operator<(const SolState& a, const SolState& b) { return a.v < b.v; }
};

template <class ImportState, class Out>
struct FlatSolution {
  DetBehavior<SolState<ImportState>, Out> behavior;
  std::vector<SolState<ImportState>> roots;  // the solution state of each variable
};

template <class Out, class ImportState>
FlatSolution<ImportState, Out> solve_flat_equation(
    const FlatEquation<Out>& e, const DetBehavior<ImportState, Out>& imports,
    const std::map<std::string, ImportState>& q_imports) {
  using St = SolState<ImportState>;
  if (!same_alphabet(e.alphabet, imports.alphabet))
    throw TypeError("equation system and imports use different input alphabets");
  if (e.rhs.size() != e.vars.size()) throw ResolutionError("equation system is not total");

  std::vector<St> roots;
  roots.reserve(e.vars.size());
  for (std::size_t x = 0; x < e.vars.size(); ++x) {
    if (const auto* imp = std::get_if<typename FlatEquation<Out>::Imported>(&e.rhs[x])) {
      auto it = q_imports.find(imp->handle);
      if (it == q_imports.end())
        throw ResolutionError("dangling import '" + imp->handle + "' for variable " + e.vars[x]);
      roots.push_back(St::of_import(it->second));
    } else {
      const auto& g = std::get<typename FlatEquation<Out>::Guarded>(e.rhs[x]);
      if (g.succ.size() != e.alphabet->size())
        throw ResolutionError("successor map of " + e.vars[x] + " is not total");
      for (std::size_t y : g.succ)
        if (y >= e.vars.size()) throw ResolutionError("successor outside the variable set");
      roots.push_back(St::of_var(x));
    }
  }

  FlatSolution<ImportState, Out> sol;
  sol.roots = roots;
  sol.behavior.alphabet = e.alphabet;
  sol.behavior.output = [e, imports](const St& s) -> Out {
    if (!s.is_var()) return imports.output(s.imported());
    return std::get<typename FlatEquation<Out>::Guarded>(e.rhs[s.var()]).out;
  };
  sol.behavior.step = [e, imports, roots](const St& s, Symbol a) -> St {
    if (!s.is_var()) return St::of_import(imports.step(s.imported(), a));
    return roots[std::get<typename FlatEquation<Out>::Guarded>(e.rhs[s.var()]).succ.at(a)];
  };
  sol.behavior.show = [e, imports](const St& s) {
    return s.is_var() ? e.vars[s.var()] : imports.show(s.imported());
  };
  return sol;
}

struct SolutionCheck {
  bool ok = true;
  std::size_t states = 0;
  std::string failure;
};

/// Checks the solution square pointwise on every state reachable from the
/// roots within `depth` letters: a guarded variable emits its declared output
/// and steps to the solution of its declared successor; an imported state
/// behaves exactly like the imported behaviour.
template <class Out, class ImportState>
SolutionCheck verify_solution(const FlatEquation<Out>& e, const FlatSolution<ImportState, Out>& sol,
                              const DetBehavior<ImportState, Out>& imports,
                              const std::map<std::string, ImportState>& q_imports,
                              std::size_t depth) {
  using St = SolState<ImportState>;
  using Guarded = typename FlatEquation<Out>::Guarded;
  using Imported = typename FlatEquation<Out>::Imported;
  SolutionCheck check;
  auto fail = [&](std::string msg) {
    if (check.ok) check.failure = std::move(msg);
    check.ok = false;
  };
  for (std::size_t x = 0; x < e.vars.size(); ++x) {
    if (const auto* imp = std::get_if<Imported>(&e.rhs[x])) {
      if (!(sol.roots[x] == St::of_import(q_imports.at(imp->handle)))) fail("import of " + e.vars[x] + " not resolved");
    } else if (!(sol.roots[x] == St::of_var(x))) {
      fail("guarded variable " + e.vars[x] + " has a foreign root");
    }
  }
  std::set<St> seen(sol.roots.begin(), sol.roots.end());
  std::deque<std::pair<St, std::size_t>> queue;
  for (const auto& r : seen) queue.emplace_back(r, 0);
  while (!queue.empty()) {
    auto [s, len] = queue.front();
    queue.pop_front();
    ++check.states;
    const auto& b = sol.behavior;
    if (s.is_var()) {
      const auto& g = std::get<Guarded>(e.rhs[s.var()]);
      if (!(b.output(s) == g.out)) fail("output mismatch at " + e.vars[s.var()]);
      for (Symbol a = 0; a < e.alphabet->size(); ++a)
        if (!(b.step(s, a) == sol.roots[g.succ[a]])) fail("successor mismatch at " + e.vars[s.var()]);
    } else {
      if (!(b.output(s) == imports.output(s.imported()))) fail("imported output mismatch");
      for (Symbol a = 0; a < e.alphabet->size(); ++a)
        if (!(b.step(s, a) == St::of_import(imports.step(s.imported(), a)))) fail("imported successor mismatch");
    }
    if (len == depth) continue;
    for (Symbol a = 0; a < e.alphabet->size(); ++a) {
      St n = b.step(s, a);
      if (seen.insert(n).second) queue.emplace_back(std::move(n), len + 1);
    }
  }
  return check;
}

}  // namespace gpc
