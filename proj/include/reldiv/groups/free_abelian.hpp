#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reldiv/encoding.hpp"
#include "reldiv/group.hpp"

namespace reldiv {

/// Z^d with the standard basis; generators are labelled a, b, c, ... and
/// encoded as the coordinate vector.
class FreeAbelianGroup {
 public:
  using Vector = std::vector<std::int64_t>;

  explicit FreeAbelianGroup(int dimension) : dim_(dimension) {
    if (dimension < 1 || dimension > 26) throw InputError("Z^d: dimension must be in 1..26");
    std::vector<std::string> bases;
    for (int i = 0; i < dimension; ++i) bases.emplace_back(1, static_cast<char>('a' + i));
    alphabet_ = Alphabet::with_inverses(bases);
  }

  int dimension() const noexcept { return dim_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }

  Element identity() const { return encode(Vector(dim_, 0)); }

  Element multiply(const Element& x, Letter s) const {
    Vector v = decode(x);
    auto& c = v.at(s / 2);
    std::int64_t step = (s % 2 == 0) ? 1 : -1;
    if (__builtin_add_overflow(c, step, &c)) throw InputError("Z^d: coordinate overflow");
    return encode(v);
  }

  std::string describe(const Element& x) const {
    auto v = decode(x);
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v[i]);
    }
    return out + ")";
  }

  std::string signature() const { return "zd:d=" + std::to_string(dim_); }

  Element encode(const Vector& v) const {
    if (static_cast<int>(v.size()) != dim_) throw InputError("Z^d: wrong vector length");
    std::string out;
    for (auto c : v) encoding::put_int(out, c);
    return out;
  }

  Vector decode(const Element& x) const {
    Vector v(dim_);
    encoding::Reader in(x);
    for (auto& c : v) {
      if (!in.small(c)) throw InputError("Z^d: coordinate out of range");
    }
    return v;
  }

  /// Exact word length: the L1 norm.
  std::uint64_t word_length(const Element& x) const {
    std::uint64_t n = 0;
    for (auto c : decode(x)) n += static_cast<std::uint64_t>(c < 0 ? -c : c);
    return n;
  }

 private:
  int dim_;
  Alphabet alphabet_;
};

}  // namespace reldiv
