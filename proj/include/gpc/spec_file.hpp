#pragma once

// Line-oriented spec files. The first meaningful line names the artifact
// kind; `#` starts a comment. Every artifact renders back into the same
// format.

#include "gpc/engine.hpp"
#include "gpc/nfa.hpp"
#include "gpc/poly.hpp"
#include "gpc/rps.hpp"
#include "gpc/stack_spec.hpp"
#include "gpc/wcfg.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gpc {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line), msg_(msg) {}
  int line() const { return line_; }
  const std::string& message() const { return msg_; }

 private:
  int line_;
  std::string msg_;
};

/// An equation system whose outputs are semiring values. Imported variables
/// name a state of a separately supplied behaviour by its textual form.
struct EqsysSpec {
  Semiring semiring;
  FlatEquation<Value> eq;
};

using Artifact = std::variant<Nfa, StackSpec, WeightedGrammar, Rps, EqsysSpec>;

inline std::string artifact_kind(const Artifact& a) {
  switch (a.index()) {
    case 0: return "nfa";
    case 1: return std::get<StackSpec>(a).deterministic ? "stack" : "stack-nd";
    case 2: return "grammar";
    case 3: return "rps";
    default: return "eqsys";
  }
}

namespace detail {

struct Line {
  int number;
  std::vector<std::string> tokens;
  std::string text;  // comment-stripped, trimmed
};

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<Line> split_lines(const std::string& content) {
  std::vector<Line> out;
  std::istringstream in(content);
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string text = trim(raw);
    if (text.empty()) continue;
    Line l{n, {}, text};
    std::istringstream ts(text);
    std::string tok;
    while (ts >> tok) l.tokens.push_back(tok);
    out.push_back(std::move(l));
  }
  return out;
}

inline std::string rest_after(const Line& l, std::size_t ntokens) {
  std::string s = l.text;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < ntokens; ++i) {
    pos = s.find_first_not_of(" \t", pos);
    pos = s.find_first_of(" \t", pos);
    if (pos == std::string::npos) return "";
  }
  return trim(s.substr(pos));
}

inline std::vector<std::string> tail(const Line& l, std::size_t from = 1) {
  return {l.tokens.begin() + static_cast<std::ptrdiff_t>(std::min(from, l.tokens.size())), l.tokens.end()};
}

template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
}

inline Nfa parse_nfa(const std::vector<Line>& lines) {
  std::vector<std::string> states, input;
  for (const auto& l : lines) {
    if (l.tokens[0] == "states") states = tail(l);
    if (l.tokens[0] == "input") input = tail(l);
  }
  if (states.empty()) throw ParseError(0, "nfa without a states line");
  Nfa n(states, at_line(0, [&] { return make_alphabet(input); }));
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "states" || t[0] == "input") continue;
    at_line(l.number, [&] {
      if (t[0] == "trans") {
        if (t.size() < 4 || t[3] != "->") throw ParseError(l.number, "expected 'trans q a -> q1 ...'");
        NfaState from = n.state_index(t[1]);
        Symbol a = n.input->at(t[2]);
        for (std::size_t i = 4; i < t.size(); ++i) n.add_transition(from, a, n.state_index(t[i]));
      } else if (t[0] == "accept") {
        for (std::size_t i = 1; i < t.size(); ++i) n.accepting[n.state_index(t[i])] = true;
      } else if (t[0] == "start") {
        if (t.size() != 2) throw ParseError(l.number, "expected 'start q'");
        n.start = n.state_index(t[1]);
      } else {
        throw ParseError(l.number, "unknown nfa directive '" + t[0] + "'");
      }
      return 0;
    });
  }
  return n;
}

inline StackSpec parse_stack(const std::vector<Line>& lines, bool deterministic) {
  StackSpec s;
  s.deterministic = deterministic;
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "states") {
      s.states = tail(l);
    } else if (t[0] == "input") {
      s.input = tail(l);
    } else if (t[0] == "stack") {
      s.gamma = tail(l);
    } else if (t[0] == "k") {
      if (t.size() != 2) throw ParseError(l.number, "expected 'k <n>'");
      s.k = at_line(l.number, [&] { return static_cast<std::size_t>(std::stoul(t[1])); });
    } else if (t[0] == "trans") {
      if (t.size() != 7 || t[4] != "->") throw ParseError(l.number, "expected 'trans q a w -> q2 v'");
      s.trans.push_back({t[1], t[2], t[3], t[5], t[6], l.number});
    } else if (t[0] == "accept") {
      if (t.size() != 3) throw ParseError(l.number, "expected 'accept q w'");
      s.accepts.push_back({t[1], t[2], l.number});
    } else if (t[0] == "start") {
      if (t.size() != 3) throw ParseError(l.number, "expected 'start q gamma0'");
      s.start = t[1];
      s.initial = t[2];
      s.start_line = l.number;
    } else {
      throw ParseError(l.number, "unknown stack machine directive '" + t[0] + "'");
    }
  }
  return s;
}

inline WeightedGrammar parse_grammar(const std::vector<Line>& lines) {
  std::optional<Semiring> sr;
  std::vector<std::string> xs, sigma;
  for (const auto& l : lines) {
    if (l.tokens[0] == "semiring") {
      if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'semiring <name>'");
      sr = at_line(l.number, [&] { return make_semiring(l.tokens[1]); });
    }
    if (l.tokens[0] == "nonterminals") xs = tail(l);
    if (l.tokens[0] == "input") sigma = tail(l);
  }
  if (!sr) throw ParseError(0, "grammar without a semiring line");
  WeightedGrammar g = at_line(0, [&] { return WeightedGrammar(*sr, make_alphabet(xs), make_alphabet(sigma)); });
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "semiring" || t[0] == "nonterminals" || t[0] == "input") continue;
    at_line(l.number, [&] {
      if (t[0] == "start") {
        g.start = parse_poly(*sr, g.nonterminals, rest_after(l, 1));
      } else if (t[0] == "out") {
        if (t.size() != 4 || t[2] != "=") throw ParseError(l.number, "expected 'out X = s'");
        g.set_out(t[1], sr->parse(t[3]));
      } else if (t[0] == "step") {
        if (t.size() < 5 || t[3] != "=") throw ParseError(l.number, "expected 'step X a = <poly>'");
        g.set_step(t[1], t[2], parse_poly(*sr, g.nonterminals, rest_after(l, 4)));
      } else {
        throw ParseError(l.number, "unknown grammar directive '" + t[0] + "'");
      }
      return 0;
    });
  }
  return g;
}

inline std::pair<std::string, std::size_t> parse_arity(const std::string& tok, int line) {
  auto slash = tok.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size())
    throw ParseError(line, "expected name/arity, got '" + tok + "'");
  return {tok.substr(0, slash), at_line(line, [&] { return static_cast<std::size_t>(std::stoul(tok.substr(slash + 1))); })};
}

inline Rps parse_rps(const std::vector<Line>& lines) {
  Rps r;
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "givens") {
      for (std::size_t i = 1; i < t.size(); ++i) r.sig.givens.push_back(parse_arity(t[i], l.number));
    } else if (t[0] == "defs") {
      for (std::size_t i = 1; i < t.size(); ++i) r.sig.defined.push_back(parse_arity(t[i], l.number));
    } else {
      auto eq = l.text.find(" = ");
      if (eq == std::string::npos) throw ParseError(l.number, "expected 'name(vars) = term'");
      Term lhs = at_line(l.number, [&] { return parse_term(trim(l.text.substr(0, eq))); });
      Term rhs = at_line(l.number, [&] { return parse_term(trim(l.text.substr(eq + 3))); });
      Definition d{lhs.head, {}, std::move(rhs)};
      for (const auto& p : lhs.args) {
        if (!p.args.empty()) throw ParseError(l.number, "parameters must be variables");
        d.params.push_back(p.head);
      }
      r.defs.push_back(std::move(d));
    }
  }
  return r;
}

inline EqsysSpec parse_eqsys(const std::vector<Line>& lines) {
  std::optional<Semiring> sr;
  std::vector<std::string> input;
  std::vector<std::string> vars;
  for (const auto& l : lines) {
    const auto& t = l.tokens;
    if (t[0] == "semiring") {
      if (t.size() != 2) throw ParseError(l.number, "expected 'semiring <name>'");
      sr = at_line(l.number, [&] { return make_semiring(t[1]); });
    } else if (t[0] == "input") {
      input = tail(l);
    } else if (t[0] == "var") {
      if (t.size() < 4 || t[2] != "=") throw ParseError(l.number, "expected 'var x = ...'");
      if (std::find(vars.begin(), vars.end(), t[1]) != vars.end())
        throw ParseError(l.number, "variable " + t[1] + " defined twice");
      vars.push_back(t[1]);
    } else {
      throw ParseError(l.number, "unknown eqsys directive '" + t[0] + "'");
    }
  }
  if (!sr) throw ParseError(0, "eqsys without a semiring line");
  EqsysSpec e{*sr, {}};
  e.eq.alphabet = at_line(0, [&] { return make_alphabet(input); });
  e.eq.vars = vars;
  using Eq = FlatEquation<Value>;
  for (const auto& l : lines) {
    if (l.tokens[0] != "var") continue;
    const auto& t = l.tokens;
    if (t[3] == "import") {
      std::string handle = rest_after(l, 4);
      if (handle.empty()) throw ParseError(l.number, "import without a state");
      e.eq.rhs.push_back(Eq::Imported{handle});
      continue;
    }
    if (t[3] != "out" || t.size() < 5) throw ParseError(l.number, "expected 'out <s>' or 'import <state>'");
    Eq::Guarded g{at_line(l.number, [&] { return sr->parse(t[4]); }),
                  std::vector<std::size_t>(input.size(), vars.size())};
    std::string rest = rest_after(l, 5);
    std::istringstream parts(rest);
    std::string seg;
    while (std::getline(parts, seg, ';')) {
      std::istringstream ss(seg);
      std::string letter, arrow, target;
      if (!(ss >> letter)) continue;
      if (!(ss >> arrow >> target) || arrow != "->")
        throw ParseError(l.number, "expected '<letter> -> <var>' segments");
      std::size_t a = at_line(l.number, [&] { return static_cast<std::size_t>(e.eq.alphabet->at(letter)); });
      g.succ[a] = at_line(l.number, [&] { return e.eq.var_index(target); });
    }
    for (std::size_t a = 0; a < input.size(); ++a)
      if (g.succ[a] == vars.size())
        throw ParseError(l.number, "no successor of " + t[1] + " on letter " + input[a]);
    e.eq.rhs.push_back(std::move(g));
  }
  return e;
}

}  // namespace detail

/// Parses the text of a spec file. Syntax and name errors raise ParseError;
/// stack machines come back raw so that `validate_machine` can report on them.
inline Artifact parse_spec_text(const std::string& content) {
  auto lines = detail::split_lines(content);
  if (lines.empty()) throw ParseError(0, "empty spec file");
  const auto& head = lines.front();
  std::vector<detail::Line> body(lines.begin() + 1, lines.end());
  const auto& h = head.tokens;
  if (h.size() == 2 && h[0] == "machine" && h[1] == "nfa") return detail::parse_nfa(body);
  if (h.size() == 2 && h[0] == "machine" && h[1] == "stack") return detail::parse_stack(body, true);
  if (h.size() == 2 && h[0] == "machine" && h[1] == "stack-nd") return detail::parse_stack(body, false);
  if (h.size() == 1 && h[0] == "grammar") return detail::parse_grammar(body);
  if (h.size() == 1 && h[0] == "rps") return detail::parse_rps(body);
  if (h.size() == 1 && h[0] == "eqsys") return detail::parse_eqsys(body);
  throw ParseError(head.number, "unknown header '" + head.text + "'");
}

inline Artifact parse_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spec_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.message());
  }
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline std::string render_nfa(const Nfa& n) {
  std::string s = "machine nfa\nstates " + join(n.states) + "\ninput " + join(n.input->names()) + "\n";
  for (NfaState q = 0; q < n.size(); ++q)
    for (Symbol a = 0; a < n.input->size(); ++a) {
      if (n.trans[q][a].empty()) continue;
      s += "trans " + n.states[q] + " " + n.input->name(a) + " ->";
      for (NfaState r : n.trans[q][a]) s += " " + n.states[r];
      s += "\n";
    }
  std::vector<std::string> acc;
  for (NfaState q = 0; q < n.size(); ++q)
    if (n.accepting[q]) acc.push_back(n.states[q]);
  if (!acc.empty()) s += "accept " + join(acc) + "\n";
  if (n.start) s += "start " + n.states[*n.start] + "\n";
  return s;
}

inline std::string render_stack(const StackSpec& m) {
  auto word = [&](const std::string& text) {
    auto parts = split_stack_text(text, m.gamma);
    if (parts.empty()) return std::string("\"\"");
    bool single = true;
    for (const auto& g : m.gamma) single = single && utf8_chars(g).size() == 1;
    return join(parts, single ? "" : ",");
  };
  std::string s = std::string("machine ") + (m.deterministic ? "stack" : "stack-nd") + "\n";
  s += "states " + join(m.states) + "\ninput " + join(m.input) + "\nstack " + join(m.gamma) + "\n";
  s += "k " + std::to_string(m.k) + "\n";
  for (const auto& t : m.trans)
    s += "trans " + t.from + " " + t.letter + " " + word(t.match) + " -> " + t.to + " " + word(t.push) + "\n";
  for (const auto& a : m.accepts) s += "accept " + a.state + " " + word(a.match) + "\n";
  if (!m.start.empty()) s += "start " + m.start + " " + word(m.initial) + "\n";
  return s;
}

inline std::string render_grammar(const WeightedGrammar& g) {
  const Semiring& sr = g.semiring;
  std::string s = "grammar\nsemiring " + std::string(sr.name()) + "\n";
  s += "nonterminals " + join(g.nonterminals->names()) + "\ninput " + join(g.input->names()) + "\n";
  s += "start " + format_poly(g.start) + "\n";
  for (Symbol x = 0; x < g.nonterminals->size(); ++x)
    if (!g.out[x].is_zero()) s += "out " + g.nonterminals->name(x) + " = " + sr.format(g.out[x]) + "\n";
  for (Symbol x = 0; x < g.nonterminals->size(); ++x)
    for (Symbol a = 0; a < g.input->size(); ++a)
      if (!g.delta[x][a].is_zero())
        s += "step " + g.nonterminals->name(x) + " " + g.input->name(a) + " = " + format_poly(g.delta[x][a]) + "\n";
  return s;
}

inline std::string render_rps(const Rps& r) {
  std::string s = "rps\ngivens";
  for (const auto& [n, a] : r.sig.givens) s += " " + n + "/" + std::to_string(a);
  s += "\ndefs";
  for (const auto& [n, a] : r.sig.defined) s += " " + n + "/" + std::to_string(a);
  s += "\n";
  for (const auto& d : r.defs) {
    Term lhs{d.name, {}};
    for (const auto& p : d.params) lhs.args.push_back({p, {}});
    s += format_term(lhs) + " = " + format_term(d.body) + "\n";
  }
  return s;
}

inline std::string render_eqsys(const EqsysSpec& e) {
  using Eq = FlatEquation<Value>;
  std::string s = "eqsys\nsemiring " + std::string(e.semiring.name()) + "\ninput " + join(e.eq.alphabet->names()) + "\n";
  for (std::size_t x = 0; x < e.eq.vars.size(); ++x) {
    s += "var " + e.eq.vars[x] + " = ";
    if (const auto* imp = std::get_if<Eq::Imported>(&e.eq.rhs[x])) {
      s += "import " + imp->handle + "\n";
      continue;
    }
    const auto& g = std::get<Eq::Guarded>(e.eq.rhs[x]);
    s += "out " + e.semiring.format(g.out);
    for (Symbol a = 0; a < g.succ.size(); ++a) s += " ; " + e.eq.alphabet->name(a) + " -> " + e.eq.vars[g.succ[a]];
    s += "\n";
  }
  return s;
}

inline std::string render_spec(const Artifact& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Nfa>) return render_nfa(x);
        else if constexpr (std::is_same_v<T, StackSpec>) return render_stack(x);
        else if constexpr (std::is_same_v<T, WeightedGrammar>) return render_grammar(x);
        else if constexpr (std::is_same_v<T, Rps>) return render_rps(x);
        else return render_eqsys(x);
      },
      a);
}

// ---------------------------------------------------------------------------
// Structural equality, used to check that rendering loses nothing.

inline bool same_artifact(const Nfa& a, const Nfa& b) {
  return a.states == b.states && same_alphabet(a.input, b.input) && a.trans == b.trans &&
         a.accepting == b.accepting && a.start == b.start;
}

inline bool same_artifact(const StackSpec& a, const StackSpec& b) {
  auto words = [](const StackSpec& s, const std::string& t) { return split_stack_text(t, s.gamma); };
  if (a.deterministic != b.deterministic || a.states != b.states || a.input != b.input || a.gamma != b.gamma ||
      a.k != b.k || a.start != b.start || words(a, a.initial) != words(b, b.initial) ||
      a.trans.size() != b.trans.size() || a.accepts.size() != b.accepts.size())
    return false;
  for (std::size_t i = 0; i < a.trans.size(); ++i) {
    const auto &x = a.trans[i], &y = b.trans[i];
    if (x.from != y.from || x.letter != y.letter || x.to != y.to || words(a, x.match) != words(b, y.match) ||
        words(a, x.push) != words(b, y.push))
      return false;
  }
  for (std::size_t i = 0; i < a.accepts.size(); ++i)
    if (a.accepts[i].state != b.accepts[i].state ||
        words(a, a.accepts[i].match) != words(b, b.accepts[i].match))
      return false;
  return true;
}

inline bool same_artifact(const WeightedGrammar& a, const WeightedGrammar& b) {
  return a.semiring == b.semiring && same_alphabet(a.nonterminals, b.nonterminals) &&
         same_alphabet(a.input, b.input) && a.out == b.out && a.delta == b.delta && a.start == b.start;
}

inline bool same_artifact(const Rps& a, const Rps& b) {
  if (a.sig.givens != b.sig.givens || a.sig.defined != b.sig.defined || a.defs.size() != b.defs.size())
    return false;
  for (std::size_t i = 0; i < a.defs.size(); ++i)
    if (a.defs[i].name != b.defs[i].name || a.defs[i].params != b.defs[i].params || !(a.defs[i].body == b.defs[i].body))
      return false;
  return true;
}

inline bool same_artifact(const EqsysSpec& a, const EqsysSpec& b) {
  using Eq = FlatEquation<Value>;
  if (!(a.semiring == b.semiring) || !same_alphabet(a.eq.alphabet, b.eq.alphabet) || a.eq.vars != b.eq.vars ||
      a.eq.rhs.size() != b.eq.rhs.size())
    return false;
  for (std::size_t i = 0; i < a.eq.rhs.size(); ++i) {
    const auto &x = a.eq.rhs[i], &y = b.eq.rhs[i];
    if (x.index() != y.index()) return false;
    if (x.index() == 1) {
      if (std::get<Eq::Imported>(x).handle != std::get<Eq::Imported>(y).handle) return false;
    } else {
      const auto &gx = std::get<Eq::Guarded>(x), &gy = std::get<Eq::Guarded>(y);
      if (!(gx.out == gy.out) || gx.succ != gy.succ) return false;
    }
  }
  return true;
}

inline bool same_artifact(const Artifact& a, const Artifact& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        return same_artifact(x, std::get<T>(b));
      },
      a);
}

}  // namespace gpc
