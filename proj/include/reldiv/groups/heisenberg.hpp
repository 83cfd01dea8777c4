#pragma once

#include <cstdint>
#include <string>

#include "reldiv/encoding.hpp"
#include "reldiv/group.hpp"

namespace reldiv {

/// Element a^k b^l c^p of the integer Heisenberg group
/// <a,b,c | b a b^-1 a^-1 = c, c central>, stored by its unique exponents.
struct HeisenbergTriple {
  BigInt k = 0;
  BigInt l = 0;
  BigInt p = 0;

  bool operator==(const HeisenbergTriple&) const = default;
};

enum class HeisenbergGenerator : std::uint8_t { a, a_inv, b, b_inv, c, c_inv };

/// Right multiplication of a normal form by one generator:
///   (a^k b^l c^p) a = a^(k+1) b^l c^(p+l),  (a^k b^l c^p) b = a^k b^(l+1) c^p,
///   (a^k b^l c^p) c = a^k b^l c^(p+1), and the inverse moves.
inline HeisenbergTriple heisenberg_multiply(HeisenbergTriple x, HeisenbergGenerator s) {
  switch (s) {
    case HeisenbergGenerator::a:
      x.k += 1;
      x.p += x.l;
      break;
    case HeisenbergGenerator::a_inv:
      x.k -= 1;
      x.p -= x.l;
      break;
    case HeisenbergGenerator::b:
      x.l += 1;
      break;
    case HeisenbergGenerator::b_inv:
      x.l -= 1;
      break;
    case HeisenbergGenerator::c:
      x.p += 1;
      break;
    case HeisenbergGenerator::c_inv:
      x.p -= 1;
      break;
  }
  return x;
}

/// The Heisenberg group as a group oracle. The generating set is either
/// {a, b, c} (the presentation's generators, default) or {a, b}.
class HeisenbergGroup {
 public:
  explicit HeisenbergGroup(bool include_c = true) : include_c_(include_c) {
    alphabet_ = include_c ? Alphabet::with_inverses({"a", "b", "c"}) : Alphabet::with_inverses({"a", "b"});
  }

  bool includes_c() const noexcept { return include_c_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  Element identity() const { return encode({}); }

  Element multiply(const Element& x, Letter s) const {
    if (s >= alphabet_.size()) throw InputError("Heisenberg: letter outside the alphabet");
    auto g = static_cast<HeisenbergGenerator>(s);
    // int64 fast path; anything that does not fit goes through BigInt.
    encoding::Reader in(x);
    std::int64_t k, l, p;
    if (in.small(k) && in.small(l) && in.small(p)) {
      bool overflow = false;
      switch (g) {
        case HeisenbergGenerator::a:
          overflow = __builtin_add_overflow(k, 1, &k) || __builtin_add_overflow(p, l, &p);
          break;
        case HeisenbergGenerator::a_inv:
          overflow = __builtin_sub_overflow(k, 1, &k) || __builtin_sub_overflow(p, l, &p);
          break;
        case HeisenbergGenerator::b:
          overflow = __builtin_add_overflow(l, 1, &l);
          break;
        case HeisenbergGenerator::b_inv:
          overflow = __builtin_sub_overflow(l, 1, &l);
          break;
        case HeisenbergGenerator::c:
          overflow = __builtin_add_overflow(p, 1, &p);
          break;
        case HeisenbergGenerator::c_inv:
          overflow = __builtin_sub_overflow(p, 1, &p);
          break;
      }
      if (!overflow) {
        std::string out;
        encoding::put_int(out, k);
        encoding::put_int(out, l);
        encoding::put_int(out, p);
        return out;
      }
    }
    return encode(heisenberg_multiply(decode(x), g));
  }

  std::string describe(const Element& x) const {
    auto t = decode(x);
    return "(" + t.k.str() + "," + t.l.str() + "," + t.p.str() + ")";
  }

  std::string signature() const { return include_c_ ? "heisenberg:gens=abc" : "heisenberg:gens=ab"; }

  static Element encode(const HeisenbergTriple& t) {
    std::string out;
    encoding::put_big(out, t.k);
    encoding::put_big(out, t.l);
    encoding::put_big(out, t.p);
    return out;
  }

  static HeisenbergTriple decode(const Element& x) {
    encoding::Reader in(x);
    HeisenbergTriple t;
    t.k = in.big();
    t.l = in.big();
    t.p = in.big();
    return t;
  }

 private:
  bool include_c_;
  Alphabet alphabet_;
};

}  // namespace reldiv
