#pragma once

// Canonical byte encodings for group elements.
//
// Integers are written as zigzag LEB128: non-negative x maps to 2x, negative x
// to -2x-1, then 7 bits per byte, low groups first, high bit set on every byte
// but the last. The encoding of a value is unique, so byte equality of encoded
// tuples is equality of the tuples. Values outside int64 use the same scheme
// with arbitrary-precision arithmetic, which keeps one canonical form for every
// integer.

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "reldiv/errors.hpp"

namespace reldiv {

using BigInt = boost::multiprecision::cpp_int;

namespace encoding {

inline void put_uint(std::string& out, std::uint64_t z) {
  while (z >= 0x80) {
    out.push_back(static_cast<char>((z & 0x7f) | 0x80));
    z >>= 7;
  }
  out.push_back(static_cast<char>(z));
}

inline void put_int(std::string& out, std::int64_t x) {
  auto z = x >= 0 ? static_cast<std::uint64_t>(x) << 1
                  : (static_cast<std::uint64_t>(-(x + 1)) << 1) | 1u;
  put_uint(out, z);
}

inline void put_big(std::string& out, const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() &&
      x <= std::numeric_limits<std::int64_t>::max()) {
    put_int(out, static_cast<std::int64_t>(x));
    return;
  }
  BigInt z = x >= 0 ? BigInt(x << 1) : BigInt(((-(x + 1)) << 1) | 1);
  while (z >= 0x80) {
    out.push_back(static_cast<char>(static_cast<unsigned>(z & 0x7f) | 0x80u));
    z >>= 7;
  }
  out.push_back(static_cast<char>(static_cast<unsigned>(z)));
}

/// Sequential reader over an encoded element.
class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const noexcept { return pos_ == bytes_.size(); }

  /// Reads one integer of at most 9 encoded bytes (|x| < 2^62). Returns false
  /// without consuming anything otherwise; big() then reads the same integer.
  bool small(std::int64_t& out) {
    std::uint64_t z = 0;
    unsigned shift = 0;
    std::size_t p = pos_;
    while (true) {
      if (p >= bytes_.size()) throw InputError("truncated element encoding");
      if (p - pos_ == 9) return false;
      auto byte = static_cast<unsigned char>(bytes_[p++]);
      z |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      if (!(byte & 0x80)) break;
      shift += 7;
    }
    pos_ = p;
    out = (z & 1) ? -static_cast<std::int64_t>(z >> 1) - 1 : static_cast<std::int64_t>(z >> 1);
    return true;
  }

  BigInt big() {
    BigInt z = 0;
    unsigned shift = 0;
    while (true) {
      if (pos_ >= bytes_.size()) throw InputError("truncated element encoding");
      auto byte = static_cast<unsigned char>(bytes_[pos_++]);
      z |= BigInt(byte & 0x7f) << shift;
      if (!(byte & 0x80)) break;
      shift += 7;
    }
    return (z & 1) ? BigInt(-(z >> 1) - 1) : BigInt(z >> 1);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace encoding
}  // namespace reldiv
