#pragma once

// Guarded recursive program schemes over a signature of givens, and their
// unfolding into finite prefixes of the (generally infinite) solution trees.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpc {

class RpsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  std::string head;
  std::vector<Term> args;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Signature {
  std::vector<std::pair<std::string, std::size_t>> givens;
  std::vector<std::pair<std::string, std::size_t>> defined;

  const std::size_t* given_arity(const std::string& s) const {
    for (const auto& [n, a] : givens)
      if (n == s) return &a;
    return nullptr;
  }
  const std::size_t* defined_arity(const std::string& s) const {
    for (const auto& [n, a] : defined)
      if (n == s) return &a;
    return nullptr;
  }
  bool is_symbol(const std::string& s) const { return given_arity(s) || defined_arity(s); }
};

struct Definition {
  std::string name;
  std::vector<std::string> params;
  Term body;
};

struct Rps {
  Signature sig;
  std::vector<Definition> defs;

  const Definition* find(const std::string& name) const {
    for (const auto& d : defs)
      if (d.name == name) return &d;
    return nullptr;
  }
};

inline std::string format_term(const Term& t) {
  if (t.args.empty()) return t.head;
  std::string s = t.head + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ", ";
    s += format_term(t.args[i]);
  }
  return s + ")";
}

/// Prefix notation: `f(t1, ..., tn)`, nullary symbols and variables bare.
inline Term parse_term(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto parse = [&](auto&& self) -> Term {
    skip_ws();
    std::size_t begin = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',' &&
           text[pos] != ' ' && text[pos] != '\t')
      ++pos;
    if (begin == pos) throw RpsError("expected a symbol at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
    Term t{std::string(text.substr(begin, pos - begin)), {}};
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        return t;
      }
      while (true) {
        t.args.push_back(self(self));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        throw RpsError("expected ',' or ')' in '" + std::string(text) + "'");
      }
    }
    return t;
  };
  Term t = parse(parse);
  skip_ws();
  if (pos != text.size()) throw RpsError("trailing input in '" + std::string(text) + "'");
  return t;
}

namespace detail {

inline void check_term(const Signature& sig, const Term& t, const std::set<std::string>* bound,
                       const std::string& where, std::vector<std::string>& diags) {
  const std::size_t* arity = sig.given_arity(t.head);
  if (!arity) arity = sig.defined_arity(t.head);
  if (arity) {
    if (*arity != t.args.size())
      diags.push_back(where + ": " + t.head + " expects " + std::to_string(*arity) + " argument(s), got " +
                      std::to_string(t.args.size()));
  } else if (!t.args.empty()) {
    diags.push_back(where + ": unknown function symbol " + t.head);
  } else if (bound && !bound->count(t.head)) {
    diags.push_back(where + ": unbound variable " + t.head);
  }
  for (const auto& a : t.args) check_term(sig, a, bound, where, diags);
}

}  // namespace detail

/// Arity, binding and guardedness diagnostics; empty iff well formed. A
/// right-hand side is guarded when its head is a given or a parameter.
inline std::vector<std::string> rps_validate(const Rps& r) {
  std::vector<std::string> diags;
  std::set<std::string> names;
  for (const auto& [n, a] : r.sig.givens)
    if (!names.insert(n).second) diags.push_back("symbol " + n + " declared twice");
  for (const auto& [n, a] : r.sig.defined)
    if (!names.insert(n).second) diags.push_back("symbol " + n + " declared twice");

  for (const auto& [n, a] : r.sig.defined) {
    auto count = std::count_if(r.defs.begin(), r.defs.end(), [&](const Definition& d) { return d.name == n; });
    if (count == 0) diags.push_back(n + " has no definition");
    if (count > 1) diags.push_back(n + " is defined more than once");
  }

  std::map<std::string, std::string> head_edge;
  for (const auto& d : r.defs) {
    const std::size_t* arity = r.sig.defined_arity(d.name);
    if (!arity) {
      diags.push_back("definition of undeclared symbol " + d.name);
      continue;
    }
    if (*arity != d.params.size())
      diags.push_back(d.name + ": declared with arity " + std::to_string(*arity) + " but defined with " +
                      std::to_string(d.params.size()) + " parameter(s)");
    std::set<std::string> params;
    for (const auto& p : d.params) {
      if (r.sig.is_symbol(p)) diags.push_back(d.name + ": parameter " + p + " clashes with a symbol");
      if (!params.insert(p).second) diags.push_back(d.name + ": parameter " + p + " repeated");
    }
    detail::check_term(r.sig, d.body, &params, d.name, diags);
    if (r.sig.defined_arity(d.body.head)) {
      diags.push_back(d.name + ": unguarded right-hand side (head " + d.body.head + " is not a given)");
      head_edge[d.name] = d.body.head;
    }
  }

  // Cycles among unguarded heads never produce a symbol.
  std::set<std::string> reported;
  for (const auto& [start, next] : head_edge) {
    std::vector<std::string> path{start};
    std::string cur = next;
    while (head_edge.count(cur) && std::find(path.begin(), path.end(), cur) == path.end()) {
      path.push_back(cur);
      cur = head_edge.at(cur);
    }
    auto loop = std::find(path.begin(), path.end(), cur);
    if (loop == path.end()) continue;
    std::vector<std::string> cycle(loop, path.end());
    std::string key = *std::min_element(cycle.begin(), cycle.end());
    if (!reported.insert(key).second) continue;
    std::string msg = "unproductive cycle:";
    for (const auto& c : cycle) msg += " " + c + " ->";
    diags.push_back(msg + " " + cur);
  }
  return diags;
}

struct TreeNode {
  enum class Kind { symbol, variable, cut };
  Kind kind = Kind::cut;
  std::string label;
  std::vector<TreeNode> children;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Finite prefix of a solution tree: nodes down to `depth` are labelled,
/// anything below is a cut marker.
struct TreePrefix {
  TreeNode root;
  std::size_t depth = 0;
};

namespace detail {

inline Term substitute(const Term& t, const std::map<std::string, const Term*>& env) {
  if (t.args.empty()) {
    auto it = env.find(t.head);
    if (it != env.end()) return *it->second;
  }
  Term out{t.head, {}};
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(substitute(a, env));
  return out;
}

// Rewrites defined-symbol heads until a given or a variable surfaces.
// Guardedness makes each round either expose a given or shrink to an argument.
inline Term head_normalize(const Rps& r, Term t) {
  while (const Definition* d = r.find(t.head)) {
    if (!r.sig.defined_arity(t.head)) break;
    std::map<std::string, const Term*> env;
    for (std::size_t i = 0; i < d->params.size(); ++i) env[d->params[i]] = &t.args.at(i);
    t = substitute(d->body, env);
  }
  return t;
}

inline TreeNode unfold(const Rps& r, const Term& term, std::size_t level, std::size_t depth) {
  Term t = head_normalize(r, term);
  TreeNode n;
  n.label = t.head;
  if (!r.sig.given_arity(t.head)) {
    n.kind = TreeNode::Kind::variable;
    return n;
  }
  n.kind = TreeNode::Kind::symbol;
  for (const auto& a : t.args)
    n.children.push_back(level == depth ? TreeNode{} : unfold(r, a, level + 1, depth));
  return n;
}

inline TreeNode truncate(const TreeNode& n, std::size_t level, std::size_t depth) {
  TreeNode out{n.kind, n.label, {}};
  for (const auto& c : n.children) out.children.push_back(level == depth ? TreeNode{} : truncate(c, level + 1, depth));
  return out;
}

}  // namespace detail

/// Call-by-name unfolding of `root` exposing every node at depth <= d.
inline TreePrefix rps_unfold(const Rps& r, const Term& root, std::size_t depth) {
  auto diags = rps_validate(r);
  if (!diags.empty()) throw RpsError("rejected scheme: " + diags.front());
  std::vector<std::string> root_diags;
  detail::check_term(r.sig, root, nullptr, "root", root_diags);
  if (!root_diags.empty()) throw RpsError(root_diags.front());
  return {detail::unfold(r, root, 0, depth), depth};
}

inline TreePrefix truncate(const TreePrefix& t, std::size_t depth) {
  if (t.depth < depth) throw std::invalid_argument("prefix is shallower than the requested depth");
  return {detail::truncate(t.root, 0, depth), depth};
}

inline bool tree_prefix_eq(const TreePrefix& a, const TreePrefix& b, std::size_t depth) {
  if (a.depth < depth || b.depth < depth)
    throw std::invalid_argument("prefix is shallower than the requested depth");
  return truncate(a, depth).root == truncate(b, depth).root;
}

inline std::string format_tree_inline(const TreeNode& n) {
  if (n.kind == TreeNode::Kind::cut) return "...";
  if (n.children.empty()) return n.label;
  std::string s = n.label + "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) s += ", ";
    s += format_tree_inline(n.children[i]);
  }
  return s + ")";
}

/// One node per line, two spaces of indentation per level, cuts as `...`.
inline std::string render_tree(const TreePrefix& t) {
  std::string out;
  auto walk = [&](auto&& self, const TreeNode& n, std::size_t level) -> void {
    out.append(2 * level, ' ');
    out += n.kind == TreeNode::Kind::cut ? "..." : n.label;
    out += '\n';
    for (const auto& c : n.children) self(self, c, level + 1);
  };
  walk(walk, t.root, 0);
  return out;
}

}  // namespace gpc
