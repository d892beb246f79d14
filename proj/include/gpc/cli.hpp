#pragma once

// Command-line front end. `run_cli` is the whole program minus `main`, so the
// end-to-end tests can drive it in-process.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict, 2 usage or
// parse error, 3 resource bound hit.

#include "gpc/engine.hpp"
#include "gpc/nfa.hpp"
#include "gpc/rps.hpp"
#include "gpc/spec_file.hpp"
#include "gpc/stack.hpp"
#include "gpc/wcfg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace gpc {

namespace cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kResource = 3 };

/// Raised for well-formed commands that cannot be applied to their inputs.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string sep;
  unsigned seed = 0;
  std::size_t max_configs = 100000;
  std::size_t max_states = 1000;
  std::size_t depth = 8;
  std::string mode = "hat";
  std::string initial_stack;
  bool exact = false;
};

inline std::string format_word(const Alphabet& a, const Word& w, const std::string& sep) {
  if (w.empty()) return "eps";
  return a.format(w, !sep.empty() ? sep : a.all_single_char() ? "" : ",");
}

inline CoeffMode parse_mode(const std::string& m) {
  if (m == "hat") return CoeffMode::hat;
  if (m == "sharp") return CoeffMode::sharp;
  throw UsageError("--mode must be hat or sharp");
}

/// `q0`, `q0,q1`, `{q0,q1}` or `{}`.
inline SubsetState parse_subset(const Nfa& n, std::string text) {
  if (!text.empty() && text.front() == '{') {
    if (text.back() != '}') throw UsageError("unterminated state set '" + text + "'");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<NfaState> qs;
  std::size_t pos = 0;
  while (!text.empty()) {
    auto next = text.find(',', pos);
    std::string name = detail::trim(text.substr(pos, next - pos));
    if (!name.empty()) qs.push_back(n.state_index(name));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return make_subset(std::move(qs));
}

inline NfaState nfa_start(const Nfa& n) {
  if (!n.start) throw UsageError("nfa has no start state");
  return *n.start;
}

inline DetBehavior<SubsetState, Value> nfa_as_bool_series(const Nfa& n) {
  auto d = nfa_determinize(n);
  DetBehavior<SubsetState, Value> b;
  b.alphabet = d.alphabet;
  b.step = d.step;
  b.show = d.show;
  Semiring sr(SemiringKind::boolean);
  b.output = [d, sr](const SubsetState& s) { return d.output(s) ? sr.one() : sr.zero(); };
  return b;
}

/// Calls `f(behavior, to_state)` with the grammar's determinization in the
/// chosen mode; `to_state` maps polynomial text over X to a state.
template <class F>
auto with_grammar(const WeightedGrammar& g, CoeffMode mode, F&& f) {
  auto parse = [&g](const std::string& text) { return parse_poly(g.semiring, g.nonterminals, text); };
  if (mode == CoeffMode::hat) return f(hat_behavior(g), std::function<Poly(const std::string&)>(parse));
  SharpBehavior sb = sharp_behavior(g);
  return f(sb.behavior, std::function<ExprId(const std::string&)>(
                            [sb, parse, &g](const std::string& text) { return sb.state(poly_embed(parse(text), g.combined)); }));
}

inline StackMachine load_machine(const StackSpec& s) {
  auto diags = validate_machine(s);
  if (!diags.empty()) throw UsageError("invalid stack machine: " + diags.front());
  return build_stack_machine(s);
}

inline int cmd_member(const Artifact& spec, const std::string& word, const Options& o, std::ostream& out) {
  bool accepted = false;
  if (const auto* n = std::get_if<Nfa>(&spec)) {
    accepted = nfa_accepts(*n, nfa_start(*n), parse_word(*n->input, word, o.sep));
  } else if (const auto* s = std::get_if<StackSpec>(&spec)) {
    StackMachine m = load_machine(*s);
    Word w = parse_word(*m.input, word, o.sep);
    StackWord initial = o.initial_stack.empty() ? m.initial_stack : stack_word(*m.gamma, o.initial_stack);
    accepted = m.deterministic ? dpda_member(m, w, initial) : npda_member(m, w, initial, o.max_configs);
  } else {
    throw UsageError("member expects an nfa or stack machine spec");
  }
  out << (accepted ? "accept" : "reject") << "\n";
  return accepted ? kOk : kNegative;
}

inline int cmd_coeff(const Artifact& spec, const std::string& word, const Options& o, std::ostream& out) {
  const auto* g = std::get_if<WeightedGrammar>(&spec);
  if (!g) throw UsageError("coeff expects a grammar spec");
  Value v = coeff(*g, parse_word(*g->input, word, o.sep), parse_mode(o.mode));
  out << g->semiring.format(v) << "\n";
  return kOk;
}

inline int report_verdict(const EquivVerdict& v, const Alphabet& sigma, const Options& o, std::ostream& out) {
  if (!v.equivalent()) {
    out << "distinguished by " << format_word(sigma, v.witness, o.sep) << "\n";
    return kNegative;
  }
  if (v.exact)
    out << "equivalent (exact)\n";
  else
    out << "equivalent up to depth " << v.depth << "\n";
  return kOk;
}

inline int cmd_equiv(const Artifact& a, const std::string& qa, const Artifact& b, const std::string& qb,
                     const Options& o, std::ostream& out) {
  if (a.index() != b.index() && !(a.index() == 1 && b.index() == 1))
    throw UsageError("cannot compare a " + artifact_kind(a) + " with a " + artifact_kind(b));
  if (o.exact && a.index() != 0) throw UsageError("--exact is only available for nfa specs");

  if (const auto* na = std::get_if<Nfa>(&a)) {
    const Nfa& nb = std::get<Nfa>(b);
    if (!same_alphabet(na->input, nb.input)) throw UsageError("input alphabets differ");
    SubsetState sa = parse_subset(*na, qa);
    SubsetState sb0 = parse_subset(nb, qb);
    Nfa u = nfa_disjoint_union(*na, nb);
    SubsetState sb;
    for (NfaState q : sb0) sb.push_back(q + static_cast<NfaState>(na->size()));
    EquivVerdict v;
    if (o.exact) {
      v = nfa_equiv_hkc(u, sa, sb);
    } else {
      auto d = nfa_determinize(u);
      v = bounded_bisim(d, sa, d, sb, o.depth, union_congruence_closure());
    }
    return report_verdict(v, *na->input, o, out);
  }
  if (const auto* ga = std::get_if<WeightedGrammar>(&a)) {
    const auto& gb = std::get<WeightedGrammar>(b);
    if (!(ga->semiring == gb.semiring)) throw UsageError("grammars over different semirings");
    if (!same_alphabet(ga->input, gb.input)) throw UsageError("input alphabets differ");
    CoeffMode mode = parse_mode(o.mode);
    return with_grammar(*ga, mode, [&](const auto& b1, const auto& to1) {
      return with_grammar(gb, mode, [&](const auto& b2, const auto& to2) {
        return report_verdict(bounded_bisim(b1, to1(qa), b2, to2(qb), o.depth), *ga->input, o, out);
      });
    });
  }
  if (const auto* sa = std::get_if<StackSpec>(&a)) {
    StackMachine ma = load_machine(*sa), mb = load_machine(std::get<StackSpec>(b));
    if (!same_alphabet(ma.input, mb.input)) throw UsageError("input alphabets differ");
    if (!same_alphabet(ma.gamma, mb.gamma)) throw UsageError("stack alphabets differ");
    auto find_state = [](const StackMachine& m, const std::string& q) {
      auto it = std::find(m.states.begin(), m.states.end(), q);
      if (it == m.states.end()) throw UsageError("unknown state '" + q + "'");
      return static_cast<StateId>(it - m.states.begin());
    };
    auto v = bounded_bisim(stack_determinize(ma), stack_unit(find_state(ma, qa)), stack_determinize(mb),
                           stack_unit(find_state(mb, qb)), o.depth);
    return report_verdict(v, *ma.input, o, out);
  }
  throw UsageError("equiv expects nfa, stack or grammar specs");
}

template <class State, class Out>
int print_reachable(const DetBehavior<State, Out>& b, const State& start, const Options& o, std::ostream& out) {
  auto r = enumerate_reachable(b, start, o.max_states);
  std::vector<std::string> shown;
  shown.reserve(r.states.size());
  for (const auto& s : r.states) shown.push_back(b.show(s));
  std::sort(shown.begin(), shown.end());
  for (const auto& s : shown) out << s << "\n";
  out << shown.size() << " states\n" << (r.complete ? "complete" : "truncated") << "\n";
  return kOk;
}

inline int cmd_enumerate(const Artifact& spec, const std::optional<std::string>& start, const Options& o,
                         std::ostream& out) {
  if (const auto* n = std::get_if<Nfa>(&spec)) {
    SubsetState s = start ? parse_subset(*n, *start) : SubsetState{nfa_start(*n)};
    return print_reachable(nfa_determinize(*n), s, o, out);
  }
  if (const auto* g = std::get_if<WeightedGrammar>(&spec)) {
    std::string text = start ? *start : format_poly(g->start);
    return with_grammar(*g, parse_mode(o.mode),
                        [&](const auto& b, const auto& to) { return print_reachable(b, to(text), o, out); });
  }
  if (const auto* ss = std::get_if<StackSpec>(&spec)) {
    StackMachine m = load_machine(*ss);
    StateId q = m.start;
    if (start) {
      auto it = std::find(m.states.begin(), m.states.end(), *start);
      if (it == m.states.end()) throw UsageError("unknown state '" + *start + "'");
      q = static_cast<StateId>(it - m.states.begin());
    }
    return print_reachable(stack_determinize(m), stack_unit(q), o, out);
  }
  throw UsageError("enumerate expects a machine or grammar spec");
}

inline int cmd_unfold(const Artifact& spec, const std::string& root, const Options& o, std::ostream& out) {
  const auto* r = std::get_if<Rps>(&spec);
  if (!r) throw UsageError("unfold expects an rps spec");
  auto diags = rps_validate(*r);
  if (!diags.empty()) throw UsageError("rejected scheme: " + diags.front());
  TreePrefix t;
  try {
    t = rps_unfold(*r, parse_term(root), o.depth);
  } catch (const RpsError& e) {
    throw UsageError(e.what());
  }
  out << render_tree(t);
  return kOk;
}

template <class ImportState>
int solve_with(const EqsysSpec& e, const DetBehavior<ImportState, Value>& imports,
               const std::function<ImportState(const std::string&)>& parse_state, const Options& o,
               std::ostream& out) {
  using Eq = FlatEquation<Value>;
  if (!same_alphabet(e.eq.alphabet, imports.alphabet)) throw UsageError("eqsys and imports use different inputs");
  std::map<std::string, ImportState> handles;
  for (const auto& rhs : e.eq.rhs)
    if (const auto* imp = std::get_if<Eq::Imported>(&rhs)) handles.emplace(imp->handle, parse_state(imp->handle));
  FlatSolution<ImportState, Value> sol;
  try {
    sol = solve_flat_equation(e.eq, imports, handles);
  } catch (const ResolutionError& err) {
    throw UsageError(err.what());
  }
  const Alphabet& sigma = *e.eq.alphabet;
  std::vector<Word> words{{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == o.depth) continue;
    for (Symbol a = 0; a < sigma.size(); ++a) {
      Word w = words[i];
      w.push_back(a);
      words.push_back(std::move(w));
    }
  }
  for (std::size_t x = 0; x < e.eq.vars.size(); ++x)
    for (const auto& w : words)
      out << e.eq.vars[x] << " " << format_word(sigma, w, o.sep) << " "
          << e.semiring.format(run_word(sol.behavior, sol.roots[x], w)) << "\n";
  auto check = verify_solution(e.eq, sol, imports, handles, o.depth);
  if (!check.ok) {
    out << "eq:sol violated: " << check.failure << "\n";
    return kNegative;
  }
  out << "eq:sol satisfied at " << check.states << " states\n";
  return kOk;
}

inline int cmd_solve(const Artifact& spec, const std::optional<Artifact>& imports, const Options& o,
                     std::ostream& out) {
  const auto* e = std::get_if<EqsysSpec>(&spec);
  if (!e) throw UsageError("solve expects an eqsys spec");
  if (!imports) {
    Nfa empty({}, e->eq.alphabet);
    return solve_with<SubsetState>(
        *e, nfa_as_bool_series(empty), [](const std::string& h) -> SubsetState {
          throw UsageError("dangling import '" + h + "' (no --imports given)");
        },
        o, out);
  }
  if (const auto* g = std::get_if<WeightedGrammar>(&*imports)) {
    if (!(g->semiring == e->semiring)) throw UsageError("eqsys and imported grammar use different semirings");
    return with_grammar(*g, parse_mode(o.mode), [&](const auto& b, const auto& to) {
      using State = std::decay_t<decltype(to(std::string()))>;
      return solve_with<State>(*e, b, to, o, out);
    });
  }
  if (const auto* n = std::get_if<Nfa>(&*imports)) {
    if (e->semiring.kind() != SemiringKind::boolean) throw UsageError("nfa imports need an eqsys over bool");
    return solve_with<SubsetState>(
        *e, nfa_as_bool_series(*n), [&](const std::string& h) { return parse_subset(*n, h); }, o, out);
  }
  throw UsageError("imports must be a grammar or nfa spec");
}

inline int cmd_validate(const Artifact& spec, std::ostream& out) {
  std::vector<std::string> diags;
  if (const auto* s = std::get_if<StackSpec>(&spec)) diags = validate_machine(*s);
  if (const auto* r = std::get_if<Rps>(&spec)) diags = rps_validate(*r);
  for (const auto& d : diags) out << d << "\n";
  if (diags.empty()) out << "ok\n";
  return diags.empty() ? kOk : kNegative;
}

}  // namespace cli

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Determinized coalgebras: membership, coefficients, equivalence, unfolding", "gpc"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--sep", o.sep, "Separator for multi-character alphabet symbols in words");
  app.add_option("--seed", o.seed, "Seed for randomized subcommands");
  app.add_option("--max-configs", o.max_configs, "Configuration bound per layer (nondeterministic stacks)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-states", o.max_states, "State bound for enumerate")->check(CLI::PositiveNumber);
  app.add_option("--depth", o.depth, "Exploration or unfolding depth")->check(CLI::NonNegativeNumber);
  app.add_option("--mode", o.mode, "Grammar determinization: hat or sharp")->check(CLI::IsMember({"hat", "sharp"}));
  app.add_option("--initial-stack", o.initial_stack, "Initial stack word (overrides the spec)");
  app.add_flag("--exact", o.exact, "Decide NFA equivalence exactly (HKC)");

  std::string spec_a, spec_b, word, state_a, state_b, root, imports_path;
  std::optional<std::string> start;

  auto* member = app.add_subcommand("member", "Membership of a word (nfa, stack, stack-nd)");
  member->add_option("spec", spec_a)->required();
  member->add_option("word", word, "Word; empty string for the empty word");

  auto* coeff_cmd = app.add_subcommand("coeff", "Coefficient of a word in a grammar's series");
  coeff_cmd->add_option("spec", spec_a)->required();
  coeff_cmd->add_option("word", word);

  auto* equiv = app.add_subcommand("equiv", "Compare two states by bisimulation up-to");
  equiv->add_option("specA", spec_a)->required();
  equiv->add_option("stateA", state_a)->required();
  equiv->add_option("specB", spec_b)->required();
  equiv->add_option("stateB", state_b)->required();

  auto* enumerate = app.add_subcommand("enumerate", "Reachable determinized states");
  enumerate->add_option("spec", spec_a)->required();
  enumerate->add_option("start", start, "Start state (defaults to the spec's)");

  auto* unfold = app.add_subcommand("unfold", "Unfold a recursive program scheme");
  unfold->add_option("spec", spec_a)->required();
  unfold->add_option("root", root)->required();

  auto* solve = app.add_subcommand("solve", "Solve a flat equation system");
  solve->add_option("spec", spec_a)->required();
  solve->add_option("--imports", imports_path, "Machine or grammar providing imported behaviours");

  auto* validate = app.add_subcommand("validate", "Report diagnostics for a spec");
  validate->add_option("spec", spec_a)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> argv_store{"gpc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*member) return cmd_member(parse_spec(spec_a), word, o, out);
    if (*coeff_cmd) return cmd_coeff(parse_spec(spec_a), word, o, out);
    if (*equiv) return cmd_equiv(parse_spec(spec_a), state_a, parse_spec(spec_b), state_b, o, out);
    if (*enumerate) return cmd_enumerate(parse_spec(spec_a), start, o, out);
    if (*unfold) return cmd_unfold(parse_spec(spec_a), root, o, out);
    if (*solve) {
      std::optional<Artifact> imports;
      if (!imports_path.empty()) imports = parse_spec(imports_path);
      return cmd_solve(parse_spec(spec_a), imports, o, out);
    }
    if (*validate) return cmd_validate(parse_spec(spec_a), out);
  } catch (const ResourceError& e) {
    err << "resource bound hit: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace gpc
