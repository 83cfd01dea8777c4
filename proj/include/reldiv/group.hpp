#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "reldiv/alphabet.hpp"

namespace reldiv {

/// Canonical byte encoding of a group element; equal bytes iff equal elements.
using Element = std::string;

/// A concrete group: an alphabet closed under formal inverses, an identity and
/// right multiplication by a generator on canonical encodings.
template <class G>
concept GroupOracle = requires(const G& g, const Element& x, Letter s) {
  { g.alphabet() } -> std::convertible_to<const Alphabet&>;
  { g.identity() } -> std::convertible_to<Element>;
  { g.multiply(x, s) } -> std::convertible_to<Element>;
  { g.describe(x) } -> std::convertible_to<std::string>;
  { g.signature() } -> std::convertible_to<std::string>;
};

template <GroupOracle G>
Element right_multiply(const G& group, Element x, const Word& w) {
  for (Letter s : w) x = group.multiply(x, s);
  return x;
}

/// Left-to-right right-multiplication of the word from the identity.
template <GroupOracle G>
Element word_to_element(const G& group, const Word& w) {
  for (Letter s : w) {
    if (s >= group.alphabet().size()) throw InputError("letter outside the alphabet");
  }
  return right_multiply(group, group.identity(), w);
}

template <GroupOracle G>
Element word_to_element(const G& group, std::string_view text) {
  return word_to_element(group, group.alphabet().parse(text));
}

/// 64-bit FNV-1a; used for config digests, not for security.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Type-erased group oracle, so runtime-configured groups can flow through the
/// same templates as the concrete ones.
class AnyGroup {
 public:
  AnyGroup() = default;

  template <GroupOracle G>
    requires(!std::same_as<std::remove_cvref_t<G>, AnyGroup>)
  AnyGroup(G group)  // NOLINT(google-explicit-constructor)
      : impl_(std::make_shared<Model<G>>(std::move(group))) {}

  const Alphabet& alphabet() const { return impl_->alphabet(); }
  Element identity() const { return impl_->identity(); }
  Element multiply(const Element& x, Letter s) const { return impl_->multiply(x, s); }
  std::string describe(const Element& x) const { return impl_->describe(x); }
  std::string signature() const { return impl_->signature(); }
  std::uint64_t digest() const { return fnv1a(signature()); }

  /// The wrapped concrete group, when it is of type G.
  template <class G>
  const G* target() const {
    auto* m = dynamic_cast<const Model<G>*>(impl_.get());
    return m ? &m->group : nullptr;
  }

  explicit operator bool() const noexcept { return static_cast<bool>(impl_); }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual const Alphabet& alphabet() const = 0;
    virtual Element identity() const = 0;
    virtual Element multiply(const Element&, Letter) const = 0;
    virtual std::string describe(const Element&) const = 0;
    virtual std::string signature() const = 0;
  };

  template <class G>
  struct Model final : Concept {
    explicit Model(G g) : group(std::move(g)) {}
    const Alphabet& alphabet() const override { return group.alphabet(); }
    Element identity() const override { return group.identity(); }
    Element multiply(const Element& x, Letter s) const override { return group.multiply(x, s); }
    std::string describe(const Element& x) const override { return group.describe(x); }
    std::string signature() const override { return group.signature(); }
    G group;
  };

  std::shared_ptr<const Concept> impl_;
};

static_assert(GroupOracle<AnyGroup>);

/// Adds one generator per extra word (and a formal inverse for each) on top of
/// an existing group. Multiplying by an added letter multiplies by its word.
class ExtendedGroup {
 public:
  ExtendedGroup(AnyGroup base, std::vector<Word> words) : base_(std::move(base)), words_(std::move(words)) {
    const auto& a = base_.alphabet();
    std::vector<std::string> symbols = a.symbols();
    std::vector<Letter> inverse;
    for (std::size_t i = 0; i < a.size(); ++i) inverse.push_back(a.inverse(static_cast<Letter>(i)));
    expansions_.resize(a.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::string name = "h" + std::to_string(i + 1);
      auto idx = static_cast<Letter>(symbols.size());
      symbols.push_back(name);
      symbols.push_back(name + std::string(kInverseSuffix));
      inverse.push_back(idx + 1);
      inverse.push_back(idx);
      expansions_.push_back(words_[i]);
      expansions_.push_back(a.invert(words_[i]));
    }
    alphabet_ = Alphabet(std::move(symbols), std::move(inverse));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  Element identity() const { return base_.identity(); }
  Element multiply(const Element& x, Letter s) const {
    if (s < base_.alphabet().size()) return base_.multiply(x, s);
    return right_multiply(base_, x, expansions_.at(s));
  }
  std::string describe(const Element& x) const { return base_.describe(x); }
  std::string signature() const {
    std::string sig = base_.signature() + ";extend=";
    for (const auto& w : words_) sig += base_.alphabet().format(w) + "|";
    return sig;
  }

  /// Added letter standing for the i-th extra word.
  Letter added_letter(std::size_t i) const { return static_cast<Letter>(base_.alphabet().size() + 2 * i); }

 private:
  AnyGroup base_;
  std::vector<Word> words_;
  std::vector<Word> expansions_;
  Alphabet alphabet_;
};

}  // namespace reldiv
