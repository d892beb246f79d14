#pragma once

// Commutative semirings used as weights: Boolean, unbounded naturals and
// unbounded integers. Values carry the tag of the instance they belong to so
// that a computation never silently mixes carriers.

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gpc {

using BigInt = boost::multiprecision::cpp_int;

enum class SemiringKind { boolean, natural, integer };

/// Raised when input names or mixes things the library does not know about.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two operands live in incompatible carriers or alphabets.
class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Value {
 public:
  Value() = default;
  Value(SemiringKind kind, BigInt v) : kind_(kind), v_(std::move(v)) {}

  SemiringKind kind() const { return kind_; }
  const BigInt& raw() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend bool operator==(const Value& a, const Value& b) {
    return a.kind_ == b.kind_ && a.v_ == b.v_;
  }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return a.v_ < b.v_;
  }

 private:
  SemiringKind kind_ = SemiringKind::boolean;
  BigInt v_ = 0;
};

class Semiring {
 public:
  explicit Semiring(SemiringKind kind = SemiringKind::boolean) : kind_(kind) {}

  SemiringKind kind() const { return kind_; }

  std::string_view name() const {
    switch (kind_) {
      case SemiringKind::boolean: return "bool";
      case SemiringKind::natural: return "nat";
      case SemiringKind::integer: return "int";
    }
    return "?";
  }

  Value zero() const { return Value(kind_, 0); }
  Value one() const { return Value(kind_, 1); }

  /// Embeds a machine integer; negative inputs are rejected outside `int`.
  Value from_int(long long n) const {
    if (n < 0 && kind_ != SemiringKind::integer)
      throw ConfigError("negative value in semiring " + std::string(name()));
    if (kind_ == SemiringKind::boolean) return Value(kind_, n != 0 ? 1 : 0);
    return Value(kind_, n);
  }

  Value add(const Value& a, const Value& b) const {
    check(a);
    check(b);
    if (kind_ == SemiringKind::boolean)
      return Value(kind_, (a.raw() != 0 || b.raw() != 0) ? 1 : 0);
    return Value(kind_, a.raw() + b.raw());
  }

  Value mul(const Value& a, const Value& b) const {
    check(a);
    check(b);
    if (kind_ == SemiringKind::boolean)
      return Value(kind_, (a.raw() != 0 && b.raw() != 0) ? 1 : 0);
    return Value(kind_, a.raw() * b.raw());
  }

  bool eq(const Value& a, const Value& b) const {
    check(a);
    check(b);
    return a == b;
  }

  bool contains(const Value& v) const { return v.kind() == kind_; }

  void check(const Value& v) const {
    if (v.kind() != kind_)
      throw TypeError("value does not belong to semiring " + std::string(name()));
  }

  /// Parses `true`/`false`/`1`/`0` for bool and decimal literals otherwise.
  Value parse(std::string_view text) const {
    std::string s(text);
    if (kind_ == SemiringKind::boolean) {
      if (s == "true" || s == "1") return one();
      if (s == "false" || s == "0") return zero();
      throw ConfigError("not a boolean value: '" + s + "'");
    }
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) throw ConfigError("not a number: '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw ConfigError("not a number: '" + s + "'");
    if (s[0] == '-' && kind_ != SemiringKind::integer)
      throw ConfigError("negative value in semiring " + std::string(name()));
    BigInt v(s[0] == '+' ? s.substr(1) : s);
    return Value(kind_, v);
  }

  std::string format(const Value& v) const {
    check(v);
    if (kind_ == SemiringKind::boolean) return v.raw() != 0 ? "true" : "false";
    return v.raw().str();
  }

  friend bool operator==(const Semiring& a, const Semiring& b) { return a.kind_ == b.kind_; }

 private:
  SemiringKind kind_;
};

inline Semiring make_semiring(std::string_view name) {
  if (name == "bool") return Semiring(SemiringKind::boolean);
  if (name == "nat") return Semiring(SemiringKind::natural);
  if (name == "int") return Semiring(SemiringKind::integer);
  throw ConfigError("unknown semiring '" + std::string(name) + "' (expected bool, nat or int)");
}

inline Value sr_fold_sum(const Semiring& sr, std::span<const Value> xs) {
  Value acc = sr.zero();
  for (const auto& x : xs) acc = sr.add(acc, x);
  return acc;
}

}  // namespace gpc
