#pragma once

// Finite named alphabets and words over them. Symbols are dense indices into
// the declaring alphabet; names are only used at the text boundary.

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpc {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

class AlphabetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Length-lexicographic order: shorter words first, ties by symbol index.
struct LengthLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw AlphabetError("empty symbol name");
      if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
        throw AlphabetError("duplicate symbol '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Symbol s) const {
    if (s >= names_.size()) throw AlphabetError("symbol index out of range");
    return names_[s];
  }
  bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }

  Symbol at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw AlphabetError("unknown symbol '" + std::string(name) + "'");
    return it->second;
  }

  Word word(const std::vector<std::string>& names) const {
    Word w;
    w.reserve(names.size());
    for (const auto& n : names) w.push_back(at(n));
    return w;
  }

  /// Symbols of `w` joined by `sep`; the empty word prints as `eps`.
  std::string format(const Word& w, std::string_view sep = " ") const {
    if (w.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += sep;
      out += name(w[i]);
    }
    return out;
  }

  bool all_single_char() const {
    for (const auto& n : names_)
      if (n.size() != 1) return false;
    return true;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, Symbol> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

/// X followed by Sigma; the left injection keeps indices unchanged.
inline AlphabetPtr disjoint_union(const Alphabet& left, const Alphabet& right) {
  std::vector<std::string> names = left.names();
  for (const auto& n : right.names()) {
    if (left.contains(n))
      throw AlphabetError("symbol '" + n + "' occurs in both alphabets");
    names.push_back(n);
  }
  return make_alphabet(std::move(names));
}

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Splits a UTF-8 string into code points.
inline std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

/// Parses a word argument: split on `sep` when given, else per character.
inline Word parse_word(const Alphabet& a, std::string_view text, std::string_view sep = {}) {
  if (text.empty()) return {};
  std::vector<std::string> parts;
  if (sep.empty()) {
    parts = utf8_chars(text);
  } else {
    std::size_t pos = 0;
    while (true) {
      auto next = text.find(sep, pos);
      parts.emplace_back(text.substr(pos, next - pos));
      if (next == std::string_view::npos) break;
      pos = next + sep.size();
    }
  }
  return a.word(parts);
}

}  // namespace gpc
