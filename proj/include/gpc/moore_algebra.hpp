#pragma once

// Lifting of the Moore functor H = S x (-)^Sigma to Sigma-pointed S-algebras.
// Given an S-algebra A with pointing j, S x A^Sigma becomes one again with
// componentwise module operations and the twisted product
//
//   (o1, d1) * (o2, d2) = (o1.o2, s |-> d1(s) * [o2, d2] + i(o1) * d2(s))
//
// where [o, d] = i(o) + sum_t j(t) * d(t) folds an observation back into A.

#include "gpc/poly.hpp"
#include "gpc/semiring.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace gpc {

/// A Sigma-pointed S-algebra given as a dictionary of operations.
template <class T>
struct SAlgebra {
  Semiring semiring;
  std::size_t sigma_size = 0;
  std::function<T()> zero;
  std::function<T()> one;
  std::function<T(const T&, const T&)> add;
  std::function<T(const T&, const T&)> mul;
  std::function<T(const Value&, const T&)> scale;
  std::function<T(std::size_t)> pointing;

  /// i(s) = s.1_A
  T embed(const Value& s) const { return scale(s, one()); }
};

/// Polynomials over X+Sigma; the pointing sends letter t to the monomial
/// `sigma_offset + t`.
inline SAlgebra<Poly> poly_algebra(Semiring sr, AlphabetPtr alphabet, std::size_t sigma_offset) {
  if (sigma_offset > alphabet->size()) throw AlphabetError("pointing offset outside alphabet");
  SAlgebra<Poly> a;
  a.semiring = sr;
  a.sigma_size = alphabet->size() - sigma_offset;
  a.zero = [sr, alphabet] { return Poly::zero(sr, alphabet); };
  a.one = [sr, alphabet] { return Poly::one(sr, alphabet); };
  a.add = [](const Poly& p, const Poly& q) { return poly_add(p, q); };
  a.mul = [](const Poly& p, const Poly& q) { return poly_mul(p, q); };
  a.scale = [](const Value& s, const Poly& p) { return poly_scale(s, p); };
  a.pointing = [sr, alphabet, sigma_offset](std::size_t t) {
    return poly_unit(sr, alphabet, static_cast<Symbol>(sigma_offset + t));
  };
  return a;
}

template <class T>
struct MooreElem {
  Value out;
  std::vector<T> deriv;

  friend bool operator==(const MooreElem& a, const MooreElem& b) {
    return a.out == b.out && a.deriv == b.deriv;
  }
};

template <class T>
T fuse(const MooreElem<T>& m, const SAlgebra<T>& a) {
  if (m.deriv.size() != a.sigma_size) throw TypeError("derivative is not total on the input alphabet");
  T acc = a.embed(m.out);
  for (std::size_t t = 0; t < a.sigma_size; ++t) acc = a.add(acc, a.mul(a.pointing(t), m.deriv[t]));
  return acc;
}

template <class T>
MooreElem<T> moore_zero(const SAlgebra<T>& a) {
  return {a.semiring.zero(), std::vector<T>(a.sigma_size, a.zero())};
}

template <class T>
MooreElem<T> moore_one(const SAlgebra<T>& a) {
  return {a.semiring.one(), std::vector<T>(a.sigma_size, a.zero())};
}

template <class T>
MooreElem<T> moore_add(const MooreElem<T>& m1, const MooreElem<T>& m2, const SAlgebra<T>& a) {
  MooreElem<T> r{a.semiring.add(m1.out, m2.out), {}};
  r.deriv.reserve(a.sigma_size);
  for (std::size_t t = 0; t < a.sigma_size; ++t) r.deriv.push_back(a.add(m1.deriv.at(t), m2.deriv.at(t)));
  return r;
}

template <class T>
MooreElem<T> moore_scale(const Value& s, const MooreElem<T>& m, const SAlgebra<T>& a) {
  MooreElem<T> r{a.semiring.mul(s, m.out), {}};
  r.deriv.reserve(a.sigma_size);
  for (std::size_t t = 0; t < a.sigma_size; ++t) r.deriv.push_back(a.scale(s, m.deriv.at(t)));
  return r;
}

template <class T>
MooreElem<T> moore_mul(const MooreElem<T>& m1, const MooreElem<T>& m2, const SAlgebra<T>& a) {
  const T folded = fuse(m2, a);
  const T lead = a.embed(m1.out);
  MooreElem<T> r{a.semiring.mul(m1.out, m2.out), {}};
  r.deriv.reserve(a.sigma_size);
  for (std::size_t t = 0; t < a.sigma_size; ++t)
    r.deriv.push_back(a.add(a.mul(m1.deriv.at(t), folded), a.mul(lead, m2.deriv.at(t))));
  return r;
}

/// (0, chi_sigma): derivative 1 at sigma, 0 elsewhere.
template <class T>
MooreElem<T> moore_pointing(std::size_t sigma, const SAlgebra<T>& a) {
  if (sigma >= a.sigma_size) throw AlphabetError("pointing at a letter outside the input alphabet");
  MooreElem<T> r = moore_zero(a);
  r.deriv[sigma] = a.one();
  return r;
}

/// S x A^Sigma with the lifted operations, as an S-algebra in its own right.
template <class T>
SAlgebra<MooreElem<T>> lifted_algebra(const SAlgebra<T>& a) {
  SAlgebra<MooreElem<T>> h;
  h.semiring = a.semiring;
  h.sigma_size = a.sigma_size;
  h.zero = [a] { return moore_zero(a); };
  h.one = [a] { return moore_one(a); };
  h.add = [a](const MooreElem<T>& x, const MooreElem<T>& y) { return moore_add(x, y, a); };
  h.mul = [a](const MooreElem<T>& x, const MooreElem<T>& y) { return moore_mul(x, y, a); };
  h.scale = [a](const Value& s, const MooreElem<T>& x) { return moore_scale(s, x, a); };
  h.pointing = [a](std::size_t t) { return moore_pointing(t, a); };
  return h;
}

}  // namespace gpc
