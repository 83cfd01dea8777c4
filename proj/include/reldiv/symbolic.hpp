#pragma once

#include <string>
#include <vector>

#include "reldiv/encoding.hpp"
#include "reldiv/errors.hpp"

namespace reldiv {

/// A word over {a, b, c} stored as syllables x^k with big exponents. Adjacent
/// syllables always have distinct letters and nonzero exponents.
class SymbolicWord {
 public:
  struct Syllable {
    char letter;
    BigInt exponent;
    bool operator==(const Syllable&) const = default;
  };

  SymbolicWord() = default;
  SymbolicWord(std::initializer_list<Syllable> s) {
    for (const auto& x : s) append(x.letter, x.exponent);
  }

  void append(char letter, const BigInt& exponent) {
    if (letter != 'a' && letter != 'b' && letter != 'c') throw InputError(std::string("symbolic letter must be a, b or c, got ") + letter);
    if (exponent == 0) return;
    if (!syl_.empty() && syl_.back().letter == letter) {
      syl_.back().exponent += exponent;
      if (syl_.back().exponent == 0) syl_.pop_back();
      return;
    }
    syl_.push_back({letter, exponent});
  }

  void append(const SymbolicWord& w) {
    for (const auto& s : w.syl_) append(s.letter, s.exponent);
  }

  const std::vector<Syllable>& syllables() const noexcept { return syl_; }
  bool empty() const noexcept { return syl_.empty(); }

  /// Sum of |exponents|: the length of the word it spells.
  BigInt length() const {
    BigInt n = 0;
    for (const auto& s : syl_) n += abs(s.exponent);
    return n;
  }

  std::string to_string() const {
    if (syl_.empty()) return "e";
    std::string out;
    for (const auto& s : syl_) {
      if (!out.empty()) out += ' ';
      out += s.letter;
      if (s.exponent != 1) out += "^" + s.exponent.str();
    }
    return out;
  }

  bool operator==(const SymbolicWord&) const = default;

 private:
  friend struct SymbolicRewriter;
  std::vector<Syllable> syl_;
};

/// Rewrites with the two defining laws of <a, b, c | b a b^-1 = a^2, c b c^-1 = b^2>
/// and their inverses, read as
///   y^e x^k y^-f  ->  y^(e-m) x^(k 2^m) y^-(f-m),   m = min(e, f)
///   y^-e x^k y^f  ->  y^-(e-m) x^(k / 2^m) y^(f-m), m = min(e, f, v2(k))
/// for (y, x) in {(b, a), (c, b)}, e, f >= 1. One such step is m applications
/// of a single law. The leftmost applicable pattern is rewritten each time.
struct SymbolicRewriter {
  struct Result {
    SymbolicWord word;
    BigInt law_applications = 0;
    std::size_t steps = 0;
  };

  static unsigned long long two_adic_valuation(const BigInt& k) {
    if (k == 0) return ~0ull;
    return static_cast<unsigned long long>(boost::multiprecision::lsb(abs(k)));
  }

  static Result rewrite(SymbolicWord w, std::size_t step_budget = 100000) {
    Result res;
    while (true) {
      bool changed = false;
      auto& s = w.syl_;
      for (std::size_t i = 0; i + 2 < s.size() && !changed; ++i) {
        const char y = s[i].letter;
        const char x = s[i + 1].letter;
        if (s[i + 2].letter != y || !((y == 'b' && x == 'a') || (y == 'c' && x == 'b'))) continue;
        const BigInt& e = s[i].exponent;
        const BigInt& f = s[i + 2].exponent;
        BigInt m;
        BigInt k = s[i + 1].exponent;
        if (e > 0 && f < 0) {
          m = e < -f ? e : BigInt(-f);
          if (m > 100000) throw BudgetError("symbolic rewrite: exponent shift too large");
          k <<= static_cast<unsigned>(m);
        } else if (e < 0 && f > 0) {
          m = -e < f ? BigInt(-e) : f;
          BigInt v = BigInt(two_adic_valuation(k));
          if (v < m) m = v;
          if (m == 0) continue;
          k >>= static_cast<unsigned>(m);  // exact: 2^m divides k
        } else {
          continue;
        }
        BigInt e2 = e > 0 ? BigInt(e - m) : BigInt(e + m);
        BigInt f2 = f > 0 ? BigInt(f - m) : BigInt(f + m);
        SymbolicWord next;
        for (std::size_t j = 0; j < i; ++j) next.append(s[j].letter, s[j].exponent);
        next.append(y, e2);
        next.append(x, k);
        next.append(y, f2);
        for (std::size_t j = i + 3; j < s.size(); ++j) next.append(s[j].letter, s[j].exponent);
        res.law_applications += m;
        w = std::move(next);
        changed = true;
      }
      if (!changed) break;
      if (++res.steps > step_budget) throw BudgetError("symbolic rewrite: step budget exceeded");
    }
    res.word = std::move(w);
    return res;
  }
};

struct GromovWitness {
  int n = 0;
  SymbolicWord witness;
  /// Letters in the witness word c^n b c^-n a c^n b^-1 c^-n.
  std::uint64_t witness_length = 0;
  SymbolicWord target;
  /// The exponent 2^(2^n) of the target a-power.
  BigInt target_exponent;
  SymbolicWord rewritten;
  BigInt law_applications = 0;
  bool verified = false;
};

inline constexpr int kGromovDefaultCap = 6;

/// Verifies c^n b c^-n a c^n b^-1 c^-n = a^(2^(2^n)) using only the two laws.
inline GromovWitness gromov_witness(int n, int cap = kGromovDefaultCap) {
  if (n < 0) throw InputError("gromov_witness: n must be nonnegative");
  if (n > cap) throw InputError("gromov_witness: n=" + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  GromovWitness g;
  g.n = n;
  g.witness.append('c', n);
  g.witness.append('b', 1);
  g.witness.append('c', -n);
  g.witness.append('a', 1);
  g.witness.append('c', n);
  g.witness.append('b', -1);
  g.witness.append('c', -n);
  g.witness_length = static_cast<std::uint64_t>(g.witness.length());
  g.target_exponent = BigInt(1) << (1u << static_cast<unsigned>(n));
  g.target.append('a', g.target_exponent);
  auto res = SymbolicRewriter::rewrite(g.witness);
  g.rewritten = res.word;
  g.law_applications = res.law_applications;
  g.verified = g.rewritten == g.target;
  return g;
}

}  // namespace reldiv
