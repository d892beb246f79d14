#pragma once

// Random generators and brute-force reference deciders shared by the unit and
// acceptance tests. Nothing here goes through the determinizations under test.

#include "gpc/moore_algebra.hpp"
#include "gpc/nfa.hpp"
#include "gpc/poly.hpp"
#include "gpc/rps.hpp"
#include "gpc/spec_file.hpp"
#include "gpc/wcfg.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must be defined"
#endif

namespace testkit {

using namespace gpc;

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

class Gen {
 public:
  explicit Gen(std::uint32_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Value value(const Semiring& sr, long long max = 3) {
    return sr.from_int(static_cast<long long>(below(static_cast<std::size_t>(max) + 1)));
  }

  Word word(std::size_t alphabet, std::size_t max_len) {
    Word w(below(max_len + 1));
    for (auto& s : w) s = static_cast<Symbol>(below(alphabet));
    return w;
  }

  Poly poly(const Semiring& sr, const AlphabetPtr& a, std::size_t max_terms = 3, std::size_t max_len = 3,
            long long max_coeff = 3) {
    Poly p = Poly::zero(sr, a);
    std::size_t n = below(max_terms + 1);
    for (std::size_t i = 0; i < n; ++i)
      p = poly_add(p, Poly::monomial(sr, a, word(a->size(), max_len), value(sr, max_coeff)));
    return p;
  }

  MooreElem<Poly> moore(const SAlgebra<Poly>& alg, const AlphabetPtr& a) {
    MooreElem<Poly> m{value(alg.semiring), {}};
    for (std::size_t t = 0; t < alg.sigma_size; ++t) m.deriv.push_back(poly(alg.semiring, a, 2, 2));
    return m;
  }

  /// Small grammar over X = {A, B, C}[0..nx), Sigma = {a, b}.
  WeightedGrammar grammar(const Semiring& sr, std::size_t nx) {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < nx; ++i) xs.push_back(std::string(1, static_cast<char>('A' + i)));
    WeightedGrammar g(sr, make_alphabet(xs), make_alphabet({"a", "b"}));
    for (std::size_t x = 0; x < nx; ++x) {
      g.out[x] = coin(0.6) ? value(sr, 2) : sr.zero();
      for (std::size_t s = 0; s < 2; ++s) g.delta[x][s] = poly(sr, g.nonterminals, 2, 2, 2);
    }
    g.start = poly(sr, g.nonterminals, 2, 2, 2);
    if (g.start.terms().empty()) g.start = Poly::monomial(sr, g.nonterminals, {0}, sr.one());
    return g;
  }

  Nfa nfa(std::size_t states, std::size_t letters, double density = 0.3) {
    std::vector<std::string> names, sigma;
    for (std::size_t i = 0; i < states; ++i) names.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < letters; ++i) sigma.push_back(std::string(1, static_cast<char>('a' + i)));
    Nfa n(names, make_alphabet(sigma));
    for (NfaState q = 0; q < states; ++q) {
      n.accepting[q] = coin(0.35);
      for (Symbol a = 0; a < letters; ++a)
        for (NfaState r = 0; r < states; ++r)
          if (coin(density)) n.add_transition(q, a, r);
    }
    n.start = 0;
    return n;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

/// Every word over `alphabet` letters of length <= max_len, length-lex order.
inline std::vector<Word> all_words(std::size_t alphabet, std::size_t max_len) {
  std::vector<Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (Symbol a = 0; a < alphabet; ++a) {
      Word w = out[i];
      w.push_back(a);
      out.push_back(std::move(w));
    }
  }
  return out;
}

// ---- regular languages ----

/// Depth-first search over individual runs.
inline bool nfa_path_search(const Nfa& n, NfaState q, const Word& w, std::size_t pos = 0) {
  if (pos == w.size()) return n.accepting[q];
  for (NfaState r : n.trans[q][w[pos]])
    if (nfa_path_search(n, r, w, pos + 1)) return true;
  return false;
}

inline bool nfa_set_path_search(const Nfa& n, const std::vector<NfaState>& qs, const Word& w) {
  for (NfaState q : qs)
    if (nfa_path_search(n, q, w)) return true;
  return false;
}

// ---- context-free reference deciders over plain strings ----

inline bool is_anbn(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] == 'a') ++i;
  std::size_t as = i;
  while (i < s.size() && s[i] == 'b') ++i;
  return i == s.size() && s.size() == 2 * as;
}

inline bool is_balanced(const std::string& s) {
  long depth = 0;
  for (char c : s) {
    depth += c == '(' ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

inline bool is_even_palindrome(const std::string& s) {
  return s.size() % 2 == 0 && std::equal(s.begin(), s.end(), s.rbegin());
}

inline std::vector<std::string> all_strings(const std::string& letters, std::size_t max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (char c : letters) out.push_back(out[i] + c);
  }
  return out;
}

// ---- weighted grammars ----

/// Weighted count of leftmost derivations: the leading nonterminal either
/// reads the next letter and is rewritten, or vanishes with its output weight.
class DerivationCounter {
 public:
  explicit DerivationCounter(const WeightedGrammar& g) : g_(g) {}

  Value sentential(const Word& u, const Word& w) {
    auto key = std::make_pair(u, w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Semiring& sr = g_.semiring;
    Value r = sr.zero();
    if (u.empty()) {
      r = w.empty() ? sr.one() : sr.zero();
    } else {
      Symbol x = u.front();
      Word rest(u.begin() + 1, u.end());
      r = sr.mul(g_.out[x], sentential(rest, w));
      if (!w.empty()) {
        Word tail(w.begin() + 1, w.end());
        for (const auto& [v, c] : g_.delta[x][w.front()].terms()) {
          Word vu = v;
          vu.insert(vu.end(), rest.begin(), rest.end());
          r = sr.add(r, sr.mul(c, sentential(vu, tail)));
        }
      }
    }
    memo_.emplace(std::move(key), r);
    return r;
  }

  Value of_poly(const Poly& p, const Word& w) {
    Value r = g_.semiring.zero();
    for (const auto& [u, c] : p.terms()) r = g_.semiring.add(r, g_.semiring.mul(c, sentential(u, w)));
    return r;
  }

 private:
  const WeightedGrammar& g_;
  std::map<std::pair<Word, Word>, Value> memo_;
};

// ---- flat equation systems ----

/// Output of variable x after reading w, by following the equations directly.
template <class Out>
Out unfold_equation(const FlatEquation<Out>& e, std::size_t x, const Word& w,
                    const std::function<Out(const std::string& handle, const Word& rest)>& imported) {
  using Eq = FlatEquation<Out>;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (const auto* imp = std::get_if<typename Eq::Imported>(&e.rhs[x]))
      return imported(imp->handle, Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.end()));
    x = std::get<typename Eq::Guarded>(e.rhs[x]).succ[w[i]];
  }
  if (const auto* imp = std::get_if<typename Eq::Imported>(&e.rhs[x])) return imported(imp->handle, {});
  return std::get<typename Eq::Guarded>(e.rhs[x]).out;
}

}  // namespace testkit
