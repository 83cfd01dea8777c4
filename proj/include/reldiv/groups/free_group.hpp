#pragma once

#include <string>

#include "reldiv/group.hpp"

namespace reldiv {

/// Free group of finite rank on a, b, ...; elements are freely reduced words,
/// one byte per letter.
class FreeGroup {
 public:
  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 1 || rank > 26) throw InputError("free group: rank must be in 1..26");
    std::vector<std::string> bases;
    for (int i = 0; i < rank; ++i) bases.emplace_back(1, static_cast<char>('a' + i));
    alphabet_ = Alphabet::with_inverses(bases);
  }

  int rank() const noexcept { return rank_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  Element identity() const { return {}; }

  Element multiply(const Element& x, Letter s) const {
    if (s >= alphabet_.size()) throw InputError("free group: letter outside the alphabet");
    Element out = x;
    if (!out.empty() && static_cast<Letter>(out.back()) == alphabet_.inverse(s)) {
      out.pop_back();
    } else {
      out.push_back(static_cast<char>(s));
    }
    return out;
  }

  std::string describe(const Element& x) const { return x.empty() ? "e" : alphabet_.format(to_word(x)); }
  std::string signature() const { return "free:rank=" + std::to_string(rank_); }

  static Word to_word(const Element& x) { return Word(x.begin(), x.end()); }

 private:
  int rank_;
  Alphabet alphabet_;
};

}  // namespace reldiv
