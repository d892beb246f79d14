#pragma once

// Stack machines: coalgebras X -> B x T(X)^Sigma for the stack monad T, whose
// elements <r, t> read and rewrite at most the k topmost stack cells:
//   r(wu) = r(w),  t(wu) = t(w)u   for all |w| = k.
// Stack words are stored top first.

#include "gpc/alphabet.hpp"
#include "gpc/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpc {

using StackWord = std::vector<Symbol>;
using StateId = std::uint32_t;

/// Target of missing table entries: outputs false everywhere and loops on
/// every letter without touching the stack.
inline constexpr StateId kDeadState = std::numeric_limits<StateId>::max();

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StackEntry {
  StateId state = kDeadState;
  StackWord rewrite;

  friend bool operator==(const StackEntry&, const StackEntry&) = default;
  friend auto operator<=>(const StackEntry&, const StackEntry&) = default;
};

struct Config {
  StateId state = kDeadState;
  StackWord stack;

  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;
};

inline StackWord concat(const StackWord& a, const StackWord& b) {
  StackWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// A k-bounded table. `shorter` holds exact matches for stacks of length < k,
/// `full` holds entries for the k topmost cells; missing cells take the
/// default value of `Cell`.
template <class Cell>
struct BoundedTable {
  std::size_t k = 0;
  std::map<StackWord, Cell> shorter;
  std::map<StackWord, Cell> full;

  /// The cell governing `stack` and the untouched remainder below it.
  std::pair<const Cell*, StackWord> locate(const StackWord& stack) const {
    if (stack.size() >= k) {
      StackWord top(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(k));
      StackWord rest(stack.begin() + static_cast<std::ptrdiff_t>(k), stack.end());
      auto it = full.find(top);
      return {it == full.end() ? nullptr : &it->second, std::move(rest)};
    }
    auto it = shorter.find(stack);
    return {it == shorter.end() ? nullptr : &it->second, {}};
  }

  friend bool operator==(const BoundedTable&, const BoundedTable&) = default;
};

/// Deterministic stack-monad element.
using StackElem = BoundedTable<StackEntry>;
/// Nondeterministic variant: each cell is a sorted set of entries.
using NdStackElem = BoundedTable<std::vector<StackEntry>>;

inline Config stack_apply(const StackElem& e, const StackWord& stack) {
  auto [cell, rest] = e.locate(stack);
  if (!cell) return {kDeadState, stack};
  return {cell->state, concat(cell->rewrite, rest)};
}

inline std::vector<Config> stack_apply(const NdStackElem& e, const StackWord& stack) {
  auto [cell, rest] = e.locate(stack);
  std::vector<Config> out;
  if (!cell) return out;
  for (const auto& entry : *cell) out.push_back({entry.state, concat(entry.rewrite, rest)});
  return out;
}

/// Predicate on stacks depending only on the k topmost cells. `truths` lists
/// the words on which it holds (exact below k, as prefixes at k).
struct StackPredicate {
  std::size_t k = 0;
  std::set<StackWord> truths;

  bool operator()(const StackWord& stack) const {
    if (stack.size() >= k)
      return truths.count(StackWord(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(k))) != 0;
    return truths.count(stack) != 0;
  }

  friend bool operator==(const StackPredicate&, const StackPredicate&) = default;
  friend auto operator<=>(const StackPredicate&, const StackPredicate&) = default;
};

inline bool pred_apply(const StackPredicate& p, const StackWord& stack) { return p(stack); }

/// All words over `gamma_size` symbols of length <= k, shortest first.
inline std::vector<StackWord> words_up_to(std::size_t gamma_size, std::size_t k) {
  std::vector<StackWord> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= k; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Symbol g = 0; g < gamma_size; ++g) {
        StackWord w = out[i];
        w.push_back(g);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

/// The same predicate with the smallest bound and explicit truth set.
inline StackPredicate canonical_predicate(const StackPredicate& p, std::size_t gamma_size) {
  StackPredicate c{p.k, {}};
  for (const auto& w : words_up_to(gamma_size, p.k))
    if (p(w)) c.truths.insert(w);
  while (c.k > 0) {
    bool reducible = true;
    for (const auto& w : words_up_to(gamma_size, c.k - 1)) {
      if (w.size() != c.k - 1) continue;
      bool here = c.truths.count(w) != 0;
      for (Symbol g = 0; g < gamma_size && reducible; ++g) {
        StackWord wg = w;
        wg.push_back(g);
        reducible = (c.truths.count(wg) != 0) == here;
      }
      if (!reducible) break;
    }
    if (!reducible) break;
    for (auto it = c.truths.begin(); it != c.truths.end();)
      it = it->size() == c.k ? c.truths.erase(it) : std::next(it);
    --c.k;
  }
  return c;
}

struct StackMachine {
  bool deterministic = true;
  std::vector<std::string> states;
  AlphabetPtr input;
  AlphabetPtr gamma;
  std::size_t k = 0;
  std::vector<std::vector<NdStackElem>> delta;  // [state][letter]
  std::vector<StackPredicate> out;              // [state]
  StateId start = 0;
  StackWord initial_stack;

  /// Deterministic view of one transition element.
  StackElem elem(StateId q, Symbol a) const {
    const NdStackElem& nd = delta.at(q).at(a);
    StackElem e;
    e.k = nd.k;
    for (const auto& [w, cell] : nd.shorter)
      if (!cell.empty()) e.shorter[w] = cell.front();
    for (const auto& [w, cell] : nd.full)
      if (!cell.empty()) e.full[w] = cell.front();
    return e;
  }

  /// Largest number of cells a single transition can add to the stack.
  std::size_t max_growth() const {
    std::size_t g = 0;
    for (const auto& row : delta)
      for (const auto& e : row) {
        for (const auto& [w, cell] : e.shorter)
          for (const auto& entry : cell)
            if (entry.rewrite.size() > w.size()) g = std::max(g, entry.rewrite.size() - w.size());
        for (const auto& [w, cell] : e.full)
          for (const auto& entry : cell)
            if (entry.rewrite.size() > w.size()) g = std::max(g, entry.rewrite.size() - w.size());
      }
    return g;
  }

  std::string format_stack(const StackWord& w) const {
    if (w.empty()) return "\"\"";
    std::string s;
    bool single = gamma->all_single_char();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i && !single) s += ",";
      s += gamma->name(w[i]);
    }
    return s;
  }

  std::string state_name(StateId q) const { return q == kDeadState ? "dead" : states.at(q); }
};

struct RunResult {
  bool accepted = false;
  std::size_t steps = 0;  // transitions taken; equals the word length
  Config final;
};

/// Real-time deterministic run: exactly one transition per letter.
inline RunResult dpda_run(const StackMachine& m, const Word& w, const StackWord& initial) {
  RunResult r;
  r.final = {m.start, initial};
  for (Symbol a : w) {
    if (a >= m.input->size()) throw AlphabetError("letter outside the input alphabet");
    if (r.final.state != kDeadState) r.final = stack_apply(m.elem(r.final.state, a), r.final.stack);
    ++r.steps;
  }
  r.accepted = r.final.state != kDeadState && pred_apply(m.out.at(r.final.state), r.final.stack);
  return r;
}

inline bool dpda_member(const StackMachine& m, const Word& w) {
  return dpda_run(m, w, m.initial_stack).accepted;
}

inline bool dpda_member(const StackMachine& m, const Word& w, const StackWord& initial) {
  return dpda_run(m, w, initial).accepted;
}

struct NdRunResult {
  bool accepted = false;
  std::size_t steps = 0;
  std::size_t peak_configs = 0;
  std::size_t max_stack = 0;
};

/// Breadth-first closure over configuration sets, one letter per layer.
/// Throws ResourceError when a layer holds more than `max_configs` entries.
inline NdRunResult npda_run(const StackMachine& m, const Word& w, const StackWord& initial,
                            std::size_t max_configs) {
  if (max_configs == 0) throw std::invalid_argument("max_configs must be at least 1");
  const std::size_t growth = m.max_growth();
  NdRunResult r;
  std::set<Config> layer{{m.start, initial}};
  r.peak_configs = 1;
  r.max_stack = initial.size();
  for (Symbol a : w) {
    if (a >= m.input->size()) throw AlphabetError("letter outside the input alphabet");
    std::set<Config> next;
    for (const auto& c : layer) {
      for (auto& n : stack_apply(m.delta.at(c.state).at(a), c.stack)) {
        if (n.state == kDeadState) continue;
        next.insert(std::move(n));
        if (next.size() > max_configs)
          throw ResourceError("configuration layer exceeds " + std::to_string(max_configs));
      }
    }
    ++r.steps;
    layer = std::move(next);
    r.peak_configs = std::max(r.peak_configs, layer.size());
    for (const auto& c : layer) r.max_stack = std::max(r.max_stack, c.stack.size());
    if (r.max_stack > initial.size() + r.steps * growth)
      throw std::logic_error("stack grew faster than the per-step rewrite bound");
  }
  for (const auto& c : layer)
    if (pred_apply(m.out.at(c.state), c.stack)) r.accepted = true;
  return r;
}

inline bool npda_member(const StackMachine& m, const Word& w, std::size_t max_configs) {
  return npda_run(m, w, m.initial_stack, max_configs).accepted;
}

inline bool npda_member(const StackMachine& m, const Word& w, const StackWord& initial,
                        std::size_t max_configs) {
  return npda_run(m, w, initial, max_configs).accepted;
}

// ---------------------------------------------------------------------------
// Determinization. A state of the determinized machine is an element of T X
// (or T' X for the nondeterministic monad): a complete table mapping every
// stack word of length <= k to the configurations it produces. Dead entries
// are dropped since they never contribute to acceptance. Tables are kept at
// their smallest bound so that equal elements compare equal.

struct StackEffect {
  std::size_t k = 0;
  std::map<StackWord, std::vector<Config>> cells;  // every word of length <= k

  std::vector<Config> apply(const StackWord& stack) const {
    if (stack.size() >= k) {
      StackWord top(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(k));
      StackWord rest(stack.begin() + static_cast<std::ptrdiff_t>(k), stack.end());
      std::vector<Config> out;
      for (const auto& c : cells.at(top)) out.push_back({c.state, concat(c.stack, rest)});
      return out;
    }
    return cells.at(stack);
  }

  friend bool operator==(const StackEffect&, const StackEffect&) = default;
  friend bool operator<(const StackEffect& a, const StackEffect& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.cells < b.cells;
  }
};

inline void minimize_effect(StackEffect& e, std::size_t gamma_size) {
  while (e.k > 0) {
    bool reducible = true;
    for (const auto& [w, cell] : e.cells) {
      if (w.size() != e.k - 1) continue;
      for (Symbol g = 0; g < gamma_size && reducible; ++g) {
        StackWord wg = w;
        wg.push_back(g);
        std::vector<Config> expect;
        for (const auto& c : cell) {
          StackWord s = c.stack;
          s.push_back(g);
          expect.push_back({c.state, std::move(s)});
        }
        std::sort(expect.begin(), expect.end());
        reducible = e.cells.at(wg) == expect;
      }
      if (!reducible) break;
    }
    if (!reducible) return;
    for (auto it = e.cells.begin(); it != e.cells.end();)
      it = it->first.size() == e.k ? e.cells.erase(it) : std::next(it);
    --e.k;
  }
}

/// eta(q): the element that moves to q and leaves the stack alone.
inline StackEffect stack_unit(StateId q) {
  StackEffect e;
  e.cells[{}] = {Config{q, {}}};
  return e;
}

inline std::string format_effect(const StackMachine& m, const StackEffect& e) {
  std::string s = "k=" + std::to_string(e.k) + " [";
  bool first = true;
  for (const auto& [w, cell] : e.cells) {
    if (!first) s += "; ";
    first = false;
    s += m.format_stack(w) + (w.size() == e.k ? ".." : "") + " ->";
    if (cell.empty()) s += " -";
    for (const auto& c : cell) s += " " + m.state_name(c.state) + "/" + m.format_stack(c.stack);
  }
  return s + "]";
}

inline std::string format_predicate(const StackMachine& m, const StackPredicate& p) {
  std::string s = "k=" + std::to_string(p.k) + " {";
  bool first = true;
  for (const auto& w : p.truths) {
    if (!first) s += ", ";
    first = false;
    s += m.format_stack(w) + (w.size() == p.k ? ".." : "");
  }
  return s + "}";
}

/// The determinized machine on stack-monad elements; its output at a state
/// is the acceptance predicate on initial stacks.
inline DetBehavior<StackEffect, StackPredicate> stack_determinize(const StackMachine& m) {
  const std::size_t gsize = m.gamma->size();
  DetBehavior<StackEffect, StackPredicate> b;
  b.alphabet = m.input;
  b.step = [m, gsize](const StackEffect& e, Symbol a) {
    StackEffect n;
    n.k = e.k + m.k;
    for (const auto& w : words_up_to(gsize, n.k)) {
      std::vector<Config> cell;
      for (const auto& c : e.apply(w))
        for (auto& r : stack_apply(m.delta.at(c.state).at(a), c.stack))
          if (r.state != kDeadState) cell.push_back(std::move(r));
      std::sort(cell.begin(), cell.end());
      cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
      n.cells.emplace(w, std::move(cell));
    }
    minimize_effect(n, gsize);
    return n;
  };
  b.output = [m, gsize](const StackEffect& e) {
    StackPredicate p;
    p.k = e.k + m.k;
    for (const auto& w : words_up_to(gsize, p.k)) {
      bool holds = false;
      for (const auto& c : e.apply(w)) holds = holds || pred_apply(m.out.at(c.state), c.stack);
      if (holds) p.truths.insert(w);
    }
    return canonical_predicate(p, gsize);
  };
  b.show = [m](const StackEffect& e) { return format_effect(m, e); };
  return b;
}

}  // namespace gpc
