#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reldiv/errors.hpp"

namespace reldiv {

/// Index of a generator label inside an Alphabet.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline constexpr std::string_view kInverseSuffix = "^-1";

/// Ordered generator labels together with the formal-inverse involution.
///
/// The order of the labels is significant: it fixes the shortlex order used by
/// normal forms and the element numbering of enumerated balls. A label may be
/// its own inverse (Coxeter generators).
class Alphabet {
 public:
  Alphabet() = default;

  Alphabet(std::vector<std::string> symbols, std::vector<Letter> inverse)
      : symbols_(std::move(symbols)), inverse_(std::move(inverse)) {
    if (symbols_.size() != inverse_.size()) {
      throw InputError("alphabet: inverse map size differs from symbol count");
    }
    if (symbols_.size() > 255) {
      throw InputError("alphabet: at most 255 generators are supported");
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw InputError("alphabet: empty label");
      if (!lookup_.emplace(symbols_[i], static_cast<Letter>(i)).second) {
        throw InputError("alphabet: duplicate label '" + symbols_[i] + "'");
      }
      if (inverse_[i] >= symbols_.size() || inverse_[inverse_[i]] != i) {
        throw InputError("alphabet: inverse map is not an involution");
      }
    }
  }

  /// `a, a^-1, b, b^-1, ...` in that order.
  static Alphabet with_inverses(const std::vector<std::string>& bases) {
    std::vector<std::string> symbols;
    std::vector<Letter> inverse;
    for (const auto& b : bases) {
      auto i = static_cast<Letter>(symbols.size());
      symbols.push_back(b);
      symbols.push_back(b + std::string(kInverseSuffix));
      inverse.push_back(i + 1);
      inverse.push_back(i);
    }
    return Alphabet(std::move(symbols), std::move(inverse));
  }

  /// Every label is its own inverse.
  static Alphabet involutions(std::vector<std::string> labels) {
    std::vector<Letter> inverse(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) inverse[i] = static_cast<Letter>(i);
    return Alphabet(std::move(labels), std::move(inverse));
  }

  /// Pairs `x` with `x^-1` when both occur; everything else is self-inverse.
  static Alphabet from_labels(std::vector<std::string> labels) {
    std::vector<Letter> inverse(labels.size());
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      inverse[i] = static_cast<Letter>(i);
      const auto& l = labels[i];
      if (l.size() > kInverseSuffix.size() && l.ends_with(kInverseSuffix)) {
        auto it = pos.find(l.substr(0, l.size() - kInverseSuffix.size()));
        if (it != pos.end()) inverse[i] = static_cast<Letter>(it->second);
      } else if (auto it = pos.find(l + std::string(kInverseSuffix)); it != pos.end()) {
        inverse[i] = static_cast<Letter>(it->second);
      }
    }
    return Alphabet(std::move(labels), std::move(inverse));
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& label(Letter s) const { return symbols_.at(s); }
  Letter inverse(Letter s) const { return inverse_.at(s); }

  std::optional<Letter> find(std::string_view label) const {
    auto it = lookup_.find(std::string(label));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Parses whitespace-separated tokens. A token is a label, or `label^k`
  /// meaning |k| copies of the label (k < 0 uses the inverse). `1` and `e`
  /// (when not labels) denote the empty word.
  Word parse(std::string_view text) const {
    Word out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (auto s = find(tok)) {
        out.push_back(*s);
        continue;
      }
      if (tok == "1" || tok == "e") continue;
      auto caret = tok.rfind('^');
      if (caret == std::string::npos || caret == 0) {
        throw InputError("unknown generator label '" + tok + "'");
      }
      auto base = find(std::string_view(tok).substr(0, caret));
      long long k = 0;
      const char* first = tok.data() + caret + 1;
      const char* last = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(first, last, k);
      if (!base || ec != std::errc() || ptr != last) {
        throw InputError("unknown generator label '" + tok + "'");
      }
      Letter s = k < 0 ? inverse(*base) : *base;
      for (long long i = 0; i < (k < 0 ? -k : k); ++i) out.push_back(s);
    }
    return out;
  }

  std::string format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += label(w[i]);
    }
    return out;
  }

  Word invert(const Word& w) const {
    Word out(w.rbegin(), w.rend());
    for (auto& s : out) s = inverse(s);
    return out;
  }

  bool operator==(const Alphabet& o) const {
    return symbols_ == o.symbols_ && inverse_ == o.inverse_;
  }

 private:
  std::vector<std::string> symbols_;
  std::vector<Letter> inverse_;
  std::unordered_map<std::string, Letter> lookup_;
};

}  // namespace reldiv
