#pragma once

// Noncommutative polynomials S<X>: finite-support maps from words over X to a
// commutative semiring. Together with substitution this is the finitary monad
// whose algebras are the associative S-algebras.

#include "gpc/alphabet.hpp"
#include "gpc/semiring.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace gpc {

class Poly {
 public:
  using Terms = std::map<Word, Value, LengthLex>;

  Poly(Semiring sr, AlphabetPtr alphabet) : sr_(sr), alphabet_(std::move(alphabet)) {}

  static Poly zero(Semiring sr, AlphabetPtr alphabet) { return Poly(sr, std::move(alphabet)); }

  static Poly monomial(Semiring sr, AlphabetPtr alphabet, Word w, const Value& c) {
    Poly p(sr, std::move(alphabet));
    p.accumulate(w, c);
    return p;
  }

  /// i(s) = s.1, the image of a scalar in the algebra.
  static Poly constant(Semiring sr, AlphabetPtr alphabet, const Value& c) {
    return monomial(sr, std::move(alphabet), {}, c);
  }

  static Poly one(Semiring sr, AlphabetPtr alphabet) {
    return constant(sr, alphabet, sr.one());
  }

  const Semiring& semiring() const { return sr_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Value coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? sr_.zero() : it->second;
  }

  /// Adds c to the coefficient of w, dropping the entry if it becomes zero.
  void accumulate(const Word& w, const Value& c) {
    sr_.check(c);
    for (Symbol s : w)
      if (s >= alphabet_->size()) throw AlphabetError("symbol outside polynomial alphabet");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(w, c);
    if (!inserted) {
      it->second = sr_.add(it->second, c);
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Rebuilds the support without zero entries. Accumulation already keeps
  /// that invariant; this exists for callers that edit raw terms.
  Poly normalized() const {
    Poly out(sr_, alphabet_);
    for (const auto& [w, c] : terms_) out.accumulate(w, c);
    return out;
  }

  /// Same support under a different (compatible) alphabet.
  Poly retagged(AlphabetPtr alphabet) const {
    Poly out(sr_, std::move(alphabet));
    out.terms_ = terms_;
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.sr_ == b.sr_ && same_alphabet(a.alphabet_, b.alphabet_) && a.terms_ == b.terms_;
  }
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
    return a.terms_ < b.terms_;
  }

 private:
  Semiring sr_;
  AlphabetPtr alphabet_;
  Terms terms_;
};

namespace detail {
inline void check_compatible(const Poly& p, const Poly& q) {
  if (!(p.semiring() == q.semiring())) throw TypeError("polynomials over different semirings");
  if (!same_alphabet(p.alphabet(), q.alphabet()))
    throw TypeError("polynomials over different alphabets");
}
}  // namespace detail

inline Poly poly_zero(Semiring sr, AlphabetPtr alphabet) { return Poly::zero(sr, std::move(alphabet)); }

inline Poly poly_unit(Semiring sr, AlphabetPtr alphabet, Symbol x) {
  if (x >= alphabet->size()) throw AlphabetError("unit of a symbol outside the alphabet");
  return Poly::monomial(sr, alphabet, {x}, sr.one());
}

inline Poly poly_unit(Semiring sr, AlphabetPtr alphabet, std::string_view name) {
  Symbol x = alphabet->at(name);
  return poly_unit(sr, std::move(alphabet), x);
}

inline Poly poly_add(const Poly& p, const Poly& q) {
  detail::check_compatible(p, q);
  Poly out = p;
  for (const auto& [w, c] : q.terms()) out.accumulate(w, c);
  return out;
}

inline Poly poly_scale(const Value& s, const Poly& p) {
  const Semiring& sr = p.semiring();
  Poly out(sr, p.alphabet());
  for (const auto& [w, c] : p.terms()) out.accumulate(w, sr.mul(s, c));
  return out;
}

inline Poly poly_mul(const Poly& p, const Poly& q) {
  detail::check_compatible(p, q);
  const Semiring& sr = p.semiring();
  Poly out(sr, p.alphabet());
  for (const auto& [u, a] : p.terms()) {
    for (const auto& [v, b] : q.terms()) {
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      out.accumulate(uv, sr.mul(a, b));
    }
  }
  return out;
}

inline Poly operator+(const Poly& p, const Poly& q) { return poly_add(p, q); }
inline Poly operator*(const Poly& p, const Poly& q) { return poly_mul(p, q); }

/// Kleisli extension: x1...xn |-> f(x1) * ... * f(xn), extended linearly.
inline Poly poly_subst(const Poly& p, const std::function<Poly(Symbol)>& f, Semiring sr,
                       AlphabetPtr target) {
  if (!(p.semiring() == sr)) throw TypeError("substitution changes the semiring");
  Poly out = Poly::zero(sr, target);
  std::map<Symbol, Poly> images;
  auto image = [&](Symbol x) -> const Poly& {
    auto it = images.find(x);
    if (it == images.end()) {
      Poly fx = f(x);
      if (!(fx.semiring() == sr) || !same_alphabet(fx.alphabet(), target))
        throw TypeError("substitution image has the wrong type");
      it = images.emplace(x, std::move(fx)).first;
    }
    return it->second;
  };
  for (const auto& [w, c] : p.terms()) {
    Poly prod = Poly::one(sr, target);
    for (Symbol x : w) prod = poly_mul(prod, image(x));
    out = poly_add(out, poly_scale(c, prod));
  }
  return out;
}

/// Substitution given as a table indexed by the source alphabet.
inline Poly poly_subst(const Poly& p, const std::vector<Poly>& images) {
  if (images.size() != p.alphabet()->size())
    throw AlphabetError("substitution is not total on the alphabet");
  if (images.empty()) return p;
  return poly_subst(
      p, [&](Symbol x) { return images.at(x); }, p.semiring(), images.front().alphabet());
}

/// Left coproduct injection S<X> -> S<X+Sigma>. `target` must extend X.
inline Poly poly_embed(const Poly& p, const AlphabetPtr& target) {
  const auto& src = p.alphabet()->names();
  const auto& dst = target->names();
  if (dst.size() < src.size() || !std::equal(src.begin(), src.end(), dst.begin()))
    throw AlphabetError("embedding target does not extend the source alphabet");
  return p.retagged(target);
}

inline std::string format_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) out += " + ";
    first = false;
    out += p.semiring().format(c);
    out += ' ';
    out += p.alphabet()->format(w);
  }
  return out;
}

/// Parses `<coeff> <sym>... + ...`. The coefficient may be omitted (means 1),
/// `eps` denotes the empty word and `0` the zero polynomial. Over an alphabet
/// of single characters a run like `SRS` is split into symbols.
inline Poly parse_poly(Semiring sr, AlphabetPtr alphabet, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::vector<std::string>> monos(1);
  std::string tok;
  while (in >> tok) {
    if (tok == "+") {
      monos.emplace_back();
    } else {
      monos.back().push_back(tok);
    }
  }
  Poly out = Poly::zero(sr, alphabet);
  for (const auto& mono : monos) {
    if (mono.empty()) {
      if (monos.size() == 1) break;
      throw ConfigError("empty monomial in '" + std::string(text) + "'");
    }
    std::size_t i = 0;
    Value c = sr.one();
    if (!alphabet->contains(mono[0])) {
      try {
        c = sr.parse(mono[0]);
        i = 1;
      } catch (const ConfigError&) {
      }
    }
    Word w;
    for (; i < mono.size(); ++i) {
      const std::string& s = mono[i];
      if (s == "eps") continue;
      if (alphabet->contains(s)) {
        w.push_back(alphabet->at(s));
        continue;
      }
      auto chars = utf8_chars(s);
      bool ok = chars.size() > 1;
      for (const auto& ch : chars) ok = ok && alphabet->contains(ch);
      if (!ok) throw AlphabetError("unknown symbol '" + s + "'");
      for (const auto& ch : chars) w.push_back(alphabet->at(ch));
    }
    out.accumulate(w, c);
  }
  return out;
}

}  // namespace gpc
