#pragma once

// Nondeterministic automata as coalgebras X -> 2 x Pf(X)^Sigma, their subset
// construction, and exact language equivalence by bisimulation up to
// congruence (HKC).

#include "gpc/alphabet.hpp"
#include "gpc/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gpc {

using NfaState = std::uint32_t;
/// Sorted, duplicate-free set of NFA states.
using SubsetState = std::vector<NfaState>;

struct Nfa {
  std::vector<std::string> states;
  AlphabetPtr input;
  std::vector<std::vector<SubsetState>> trans;  // [state][letter]
  std::vector<bool> accepting;
  std::optional<NfaState> start;

  Nfa() = default;
  Nfa(std::vector<std::string> state_names, AlphabetPtr sigma)
      : states(std::move(state_names)),
        input(std::move(sigma)),
        trans(states.size(), std::vector<SubsetState>(input->size())),
        accepting(states.size(), false) {}

  std::size_t size() const { return states.size(); }

  NfaState state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw AlphabetError("unknown NFA state '" + name + "'");
    return static_cast<NfaState>(it - states.begin());
  }

  void add_transition(NfaState from, Symbol a, NfaState to) {
    auto& succ = trans.at(from).at(a);
    auto it = std::lower_bound(succ.begin(), succ.end(), to);
    if (it == succ.end() || *it != to) succ.insert(it, to);
  }
};

inline SubsetState make_subset(std::vector<NfaState> qs) {
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

inline SubsetState subset_union(const SubsetState& a, const SubsetState& b) {
  SubsetState out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool subset_includes(const SubsetState& big, const SubsetState& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline std::string format_subset(const Nfa& n, const SubsetState& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += n.states.at(s[i]);
  }
  return out + "}";
}

/// The usual powerset construction.
inline DetBehavior<SubsetState, bool> nfa_determinize(const Nfa& n) {
  DetBehavior<SubsetState, bool> b;
  b.alphabet = n.input;
  b.output = [n](const SubsetState& s) {
    return std::any_of(s.begin(), s.end(), [&](NfaState q) { return bool(n.accepting.at(q)); });
  };
  b.step = [n](const SubsetState& s, Symbol a) {
    SubsetState out;
    for (NfaState q : s) out = subset_union(out, n.trans.at(q).at(a));
    return out;
  };
  b.show = [n](const SubsetState& s) { return format_subset(n, s); };
  return b;
}

inline bool nfa_accepts(const Nfa& n, NfaState q0, const Word& w) {
  return run_word(nfa_determinize(n), SubsetState{q0}, w);
}

/// Normal form of `s` under the congruence generated by `relation`: saturate
/// with x+y whenever one side of a related pair is already included.
inline SubsetState congruence_normal_form(
    const std::vector<std::pair<SubsetState, SubsetState>>& relation, SubsetState s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [x, y] : relation) {
      bool has_x = subset_includes(s, x), has_y = subset_includes(s, y);
      if (has_x && !has_y) {
        s = subset_union(s, y);
        changed = true;
      } else if (has_y && !has_x) {
        s = subset_union(s, x);
        changed = true;
      }
    }
  }
  return s;
}

inline ClosureHook<SubsetState, SubsetState> union_congruence_closure() {
  return [](const std::vector<std::pair<SubsetState, SubsetState>>& rel, const SubsetState& a,
            const SubsetState& b) {
    return congruence_normal_form(rel, a) == congruence_normal_form(rel, b);
  };
}

/// Exact: the subset space is finite, so exploration always closes.
inline EquivVerdict nfa_equiv_hkc(const Nfa& n, const SubsetState& s1, const SubsetState& s2) {
  auto b = nfa_determinize(n);
  return bounded_bisim(b, s1, b, s2, std::numeric_limits<std::size_t>::max(),
                       union_congruence_closure());
}

/// Disjoint union; states of `b` are shifted by `a.size()` and renamed with
/// `prefix_b` when a name clashes.
inline Nfa nfa_disjoint_union(const Nfa& a, const Nfa& b, const std::string& prefix_b = "B.") {
  if (!same_alphabet(a.input, b.input)) throw TypeError("NFAs over different input alphabets");
  std::vector<std::string> names = a.states;
  for (const auto& s : b.states) {
    bool clash = std::find(a.states.begin(), a.states.end(), s) != a.states.end();
    names.push_back(clash ? prefix_b + s : s);
  }
  Nfa u(names, a.input);
  auto shift = static_cast<NfaState>(a.size());
  for (NfaState q = 0; q < a.size(); ++q) {
    u.accepting[q] = a.accepting[q];
    u.trans[q] = a.trans[q];
  }
  for (NfaState q = 0; q < b.size(); ++q) {
    u.accepting[q + shift] = b.accepting[q];
    for (Symbol x = 0; x < b.input->size(); ++x)
      for (NfaState r : b.trans[q][x]) u.trans[q + shift][x].push_back(r + shift);
  }
  u.start = a.start;
  return u;
}

}  // namespace gpc
