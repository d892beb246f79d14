#pragma once

// Weighted context-free grammars in one-letter-step form, i.e. coalgebras
// c = <o, delta> : X -> S x S<X>^Sigma, and their two determinizations:
//
//   hat:   on S<X>, extending <o, delta> inductively along words and then
//          linearly;
//   sharp: on S<X+Sigma>, the generalized powerset construction for the
//          lifted Moore algebra, with terminals acting as pointings.
//
// Both assign the same power series to a start polynomial.

#include "gpc/engine.hpp"
#include "gpc/moore_algebra.hpp"
#include "gpc/poly.hpp"

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace gpc {

struct WeightedGrammar {
  Semiring semiring;
  AlphabetPtr nonterminals;  // X
  AlphabetPtr input;         // Sigma
  AlphabetPtr combined;      // X followed by Sigma
  std::vector<Value> out;                 // [x]
  std::vector<std::vector<Poly>> delta;   // [x][sigma], polynomials over X
  Poly start;

  WeightedGrammar(Semiring sr, AlphabetPtr x, AlphabetPtr sigma)
      : semiring(sr),
        nonterminals(std::move(x)),
        input(std::move(sigma)),
        combined(disjoint_union(*nonterminals, *input)),
        out(nonterminals->size(), sr.zero()),
        delta(nonterminals->size(),
              std::vector<Poly>(input->size(), Poly::zero(sr, nonterminals))),
        start(Poly::zero(sr, nonterminals)) {}

  void set_out(const std::string& x, const Value& v) {
    semiring.check(v);
    out.at(nonterminals->at(x)) = v;
  }
  void set_step(const std::string& x, const std::string& sigma, const Poly& p) {
    if (!(p.semiring() == semiring) || !same_alphabet(p.alphabet(), nonterminals))
      throw TypeError("step polynomial must range over the nonterminals");
    delta.at(nonterminals->at(x)).at(input->at(sigma)) = p;
  }

  Poly embedded_start() const { return poly_embed(start, combined); }
};

/// (o-bar(u), sigma |-> delta-bar(u, sigma)) computed by
///   o-bar(eps) = 1,            delta-bar(eps, s) = 0,
///   o-bar(xu)  = o(x) o-bar(u), delta-bar(xu, s) = delta(x,s)*u + i(o(x))*delta-bar(u,s).
inline MooreElem<Poly> hat_extend_word(const WeightedGrammar& g, const Word& u) {
  const Semiring& sr = g.semiring;
  MooreElem<Poly> acc{sr.one(), std::vector<Poly>(g.input->size(), Poly::zero(sr, g.nonterminals))};
  Word suffix;
  for (auto it = u.rbegin(); it != u.rend(); ++it) {
    Symbol x = *it;
    if (x >= g.nonterminals->size()) throw AlphabetError("word is not over the nonterminals");
    Poly suffix_poly = Poly::monomial(sr, g.nonterminals, suffix, sr.one());
    Poly lead = Poly::constant(sr, g.nonterminals, g.out[x]);
    for (Symbol s = 0; s < g.input->size(); ++s)
      acc.deriv[s] = poly_add(poly_mul(g.delta[x][s], suffix_poly), poly_mul(lead, acc.deriv[s]));
    acc.out = sr.mul(g.out[x], acc.out);
    suffix.insert(suffix.begin(), x);
  }
  return acc;
}

/// Free S-module extension of hat_extend_word to a polynomial state.
inline MooreElem<Poly> hat_observe(const WeightedGrammar& g, const Poly& p) {
  const Semiring& sr = g.semiring;
  MooreElem<Poly> r{sr.zero(), std::vector<Poly>(g.input->size(), Poly::zero(sr, g.nonterminals))};
  for (const auto& [u, c] : p.terms()) {
    MooreElem<Poly> m = hat_extend_word(g, u);
    r.out = sr.add(r.out, sr.mul(c, m.out));
    for (Symbol s = 0; s < g.input->size(); ++s) r.deriv[s] = poly_add(r.deriv[s], poly_scale(c, m.deriv[s]));
  }
  return r;
}

inline DetBehavior<Poly, Value> hat_behavior(const WeightedGrammar& g) {
  DetBehavior<Poly, Value> b;
  b.alphabet = g.input;
  b.output = [g](const Poly& p) { return hat_observe(g, p).out; };
  b.step = [g](const Poly& p, Symbol s) { return hat_observe(g, p).deriv.at(s); };
  b.show = [](const Poly& p) { return format_poly(p); };
  return b;
}

/// The Sigma-pointed S-algebra S<X+Sigma> that carries the sharp behaviour.
inline SAlgebra<Poly> grammar_algebra(const WeightedGrammar& g) {
  return poly_algebra(g.semiring, g.combined, g.nonterminals->size());
}

/// Image of a single generator under the determinized structure: nonterminals
/// observe through c followed by the left injection, terminals are pointings.
inline MooreElem<Poly> sharp_generator(const WeightedGrammar& g, const SAlgebra<Poly>& a, Symbol sym) {
  const std::size_t nx = g.nonterminals->size();
  if (sym >= nx) return moore_pointing(sym - nx, a);
  MooreElem<Poly> m{g.out[sym], {}};
  for (Symbol s = 0; s < g.input->size(); ++s) m.deriv.push_back(poly_embed(g.delta[sym][s], g.combined));
  return m;
}

/// The unique S-algebra morphism S<X+Sigma> -> S x S<X+Sigma>^Sigma extending
/// the generators: monomials become products, sums become sums. Works on
/// normal-form polynomials, whose size explodes after a few letters; see
/// SharpArena for the representation used to run words.
inline MooreElem<Poly> sharp_observe(const WeightedGrammar& g, const Poly& p) {
  const SAlgebra<Poly> a = grammar_algebra(g);
  std::vector<std::optional<MooreElem<Poly>>> gens(g.combined->size());
  auto gen = [&](Symbol sym) -> const MooreElem<Poly>& {
    if (!gens.at(sym)) gens[sym] = sharp_generator(g, a, sym);
    return *gens[sym];
  };
  MooreElem<Poly> r = moore_zero(a);
  for (const auto& [w, c] : p.terms()) {
    MooreElem<Poly> m = moore_one(a);
    for (auto it = w.rbegin(); it != w.rend(); ++it) m = moore_mul(gen(*it), m, a);
    r = moore_add(r, moore_scale(c, m, a), a);
  }
  return r;
}

/// Sharp determinization on normal-form polynomial states.
inline DetBehavior<Poly, Value> sharp_poly_behavior(const WeightedGrammar& g) {
  DetBehavior<Poly, Value> b;
  b.alphabet = g.input;
  b.output = [g](const Poly& p) { return sharp_observe(g, p).out; };
  b.step = [g](const Poly& p, Symbol s) { return sharp_observe(g, p).deriv.at(s); };
  b.show = [](const Poly& p) { return format_poly(p); };
  return b;
}

/// [c(p)]: the sharp state folded back from its one-step observation.
inline Poly sharp_fuse_state(const WeightedGrammar& g, const Poly& p) {
  return fuse(sharp_observe(g, p), grammar_algebra(g));
}

using ExprId = std::uint32_t;

/// Elements of S<X+Sigma> as hash-consed expressions (sums, scalings,
/// products, generators), with the sharp structure evaluated node by node.
/// Every node denotes a polynomial and `to_poly` recovers it; the only
/// rewriting done by the constructors is by S-algebra laws (units, zeros,
/// commutativity of +, nested scalings), so the denotation is unchanged.
///
/// Unlike expanded polynomials, a derivative here shares structure with its
/// source: the derivative of a fused node is again a fused node.
class SharpArena {
 public:
  enum class Op : std::uint8_t { zero, one, gen, add, scale, mul };

  explicit SharpArena(WeightedGrammar g) : g_(std::move(g)), nx_(g_.nonterminals->size()), ns_(g_.input->size()) {
    zero_ = intern({Op::zero, 0, g_.semiring.zero(), 0, 0});
    one_ = intern({Op::one, 0, g_.semiring.zero(), 0, 0});
  }

  const WeightedGrammar& grammar() const { return g_; }
  std::size_t size() const { return nodes_.size(); }
  ExprId zero() const { return zero_; }
  ExprId one() const { return one_; }

  ExprId gen(Symbol s) {
    if (s >= nx_ + ns_) throw AlphabetError("generator outside X+Sigma");
    return intern({Op::gen, s, g_.semiring.zero(), 0, 0});
  }

  ExprId add(ExprId a, ExprId b) {
    if (a == zero_) return b;
    if (b == zero_) return a;
    if (b < a) std::swap(a, b);
    return intern({Op::add, 0, g_.semiring.zero(), a, b});
  }

  ExprId scale(const Value& s, ExprId a) {
    if (s.is_zero() || a == zero_) return zero_;
    if (s == g_.semiring.one()) return a;
    const Node& n = nodes_[a];
    if (n.op == Op::scale) return scale(g_.semiring.mul(s, n.s), n.a);
    return intern({Op::scale, 0, s, a, 0});
  }

  ExprId mul(ExprId a, ExprId b) {
    if (a == zero_ || b == zero_) return zero_;
    if (a == one_) return b;
    if (b == one_) return a;
    return intern({Op::mul, 0, g_.semiring.zero(), a, b});
  }

  /// Monomials as right-nested products, matching the fold in sharp_observe.
  ExprId from_poly(const Poly& p) {
    if (!same_alphabet(p.alphabet(), g_.combined)) throw TypeError("sharp states range over X+Sigma");
    ExprId sum = zero_;
    for (const auto& [w, c] : p.terms()) {
      ExprId m = one_;
      for (auto it = w.rbegin(); it != w.rend(); ++it) m = mul(gen(*it), m);
      sum = add(sum, scale(c, m));
    }
    return sum;
  }

  /// Expands to normal form; throws ResourceLimit when more than
  /// `max_terms` terms appear along the way.
  struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
  };
  Poly to_poly(ExprId e, std::size_t max_terms = std::numeric_limits<std::size_t>::max()) {
    std::map<ExprId, Poly> memo;
    return expand(e, memo, max_terms);
  }

  /// c#(e) = (output, derivative per letter).
  MooreElem<ExprId> observe(ExprId e) {
    if (e < obs_.size() && obs_[e]) return *obs_[e];
    const Node n = nodes_[e];
    const Semiring& sr = g_.semiring;
    MooreElem<ExprId> r{sr.zero(), std::vector<ExprId>(ns_, zero_)};
    switch (n.op) {
      case Op::zero:
        break;
      case Op::one:
        r.out = sr.one();
        break;
      case Op::gen:
        if (n.sym < nx_) {
          r.out = g_.out[n.sym];
          for (Symbol t = 0; t < ns_; ++t) r.deriv[t] = from_poly(poly_embed(g_.delta[n.sym][t], g_.combined));
        } else {
          r.deriv[n.sym - nx_] = one_;
        }
        break;
      case Op::add: {
        auto a = observe(n.a), b = observe(n.b);
        r.out = sr.add(a.out, b.out);
        for (Symbol t = 0; t < ns_; ++t) r.deriv[t] = add(a.deriv[t], b.deriv[t]);
        break;
      }
      case Op::scale: {
        auto a = observe(n.a);
        r.out = sr.mul(n.s, a.out);
        for (Symbol t = 0; t < ns_; ++t) r.deriv[t] = scale(n.s, a.deriv[t]);
        break;
      }
      case Op::mul: {
        // (o1, d1) * (o2, d2) = (o1 o2, t |-> d1(t) * [o2, d2] + i(o1) * d2(t))
        auto a = observe(n.a), b = observe(n.b);
        ExprId folded = fuse_of(n.b);
        r.out = sr.mul(a.out, b.out);
        for (Symbol t = 0; t < ns_; ++t) r.deriv[t] = add(mul(a.deriv[t], folded), scale(a.out, b.deriv[t]));
        break;
      }
    }
    if (obs_.size() <= e) obs_.resize(e + 1);
    obs_[e] = r;
    return r;
  }

  /// [c#(e)] = i(o) + sum_t t * d(t).
  ExprId fuse_of(ExprId e) {
    if (auto it = fused_.find(e); it != fused_.end()) return it->second;
    auto m = observe(e);
    ExprId acc = scale(m.out, one_);
    for (Symbol t = 0; t < ns_; ++t) acc = add(acc, mul(gen(static_cast<Symbol>(nx_ + t)), m.deriv[t]));
    fused_.emplace(e, acc);
    return acc;
  }

 private:
  struct Node {
    Op op;
    Symbol sym;
    Value s;
    ExprId a, b;
  };
  using Key = std::tuple<Op, Symbol, Value, ExprId, ExprId>;

  ExprId intern(const Node& n) {
    Key key{n.op, n.sym, n.s, n.a, n.b};
    auto [it, inserted] = unique_.emplace(key, static_cast<ExprId>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  }

  Poly expand(ExprId e, std::map<ExprId, Poly>& memo, std::size_t max_terms) {
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    const Node n = nodes_[e];
    const Semiring& sr = g_.semiring;
    Poly r = Poly::zero(sr, g_.combined);
    switch (n.op) {
      case Op::zero: break;
      case Op::one: r = Poly::one(sr, g_.combined); break;
      case Op::gen: r = poly_unit(sr, g_.combined, n.sym); break;
      case Op::add: r = poly_add(expand(n.a, memo, max_terms), expand(n.b, memo, max_terms)); break;
      case Op::scale: r = poly_scale(n.s, expand(n.a, memo, max_terms)); break;
      case Op::mul: r = poly_mul(expand(n.a, memo, max_terms), expand(n.b, memo, max_terms)); break;
    }
    if (r.size() > max_terms) throw ResourceLimit("expression expands beyond " + std::to_string(max_terms) + " terms");
    memo.emplace(e, r);
    return r;
  }

  WeightedGrammar g_;
  std::size_t nx_, ns_;
  ExprId zero_ = 0, one_ = 0;
  std::vector<Node> nodes_;
  std::map<Key, ExprId> unique_;
  std::vector<std::optional<MooreElem<ExprId>>> obs_;
  std::map<ExprId, ExprId> fused_;
};

/// Sharp determinization over SharpArena expressions. States are node ids of
/// one shared arena; `state` converts a polynomial over X+Sigma.
struct SharpBehavior {
  std::shared_ptr<SharpArena> arena;
  DetBehavior<ExprId, Value> behavior;

  ExprId state(const Poly& p) const { return arena->from_poly(p); }
  Poly normal_form(ExprId e) const { return arena->to_poly(e); }
};

inline SharpBehavior sharp_behavior(const WeightedGrammar& g) {
  auto arena = std::make_shared<SharpArena>(g);
  SharpBehavior sb{arena, {}};
  sb.behavior.alphabet = g.input;
  sb.behavior.output = [arena](ExprId e) { return arena->observe(e).out; };
  sb.behavior.step = [arena](ExprId e, Symbol s) { return arena->observe(e).deriv.at(s); };
  sb.behavior.show = [arena](ExprId e) {
    try {
      return format_poly(arena->to_poly(e, 256));
    } catch (const SharpArena::ResourceLimit&) {
      return "<expression #" + std::to_string(e) + ", over 256 terms>";
    }
  };
  return sb;
}

enum class CoeffMode { hat, sharp };

inline Value coeff(const WeightedGrammar& g, const Word& w, CoeffMode mode) {
  if (mode == CoeffMode::hat) return run_word(hat_behavior(g), g.start, w);
  SharpBehavior sb = sharp_behavior(g);
  return run_word(sb.behavior, sb.state(g.embedded_start()), w);
}

}  // namespace gpc
