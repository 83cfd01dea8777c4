#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "reldiv/alphabet.hpp"
#include "reldiv/errors.hpp"

namespace reldiv {

/// Reduction orders. Letters are ranked by their position in the alphabet.
///
/// shortlex: shorter first, then lexicographic.
/// recursive-path: the path order on words read as unary terms from the left,
/// x u > y v iff u >= y v, or x > y and x u > v, or x = y and u > v. It
/// accepts rules such as "b a -> c a b" that no length-first order can orient.
enum class ReductionOrder { shortlex, recursive_path };

inline const char* to_string(ReductionOrder o) {
  return o == ReductionOrder::shortlex ? "shortlex" : "recursive-path";
}

inline ReductionOrder parse_order(const std::string& s) {
  if (s == "shortlex") return ReductionOrder::shortlex;
  if (s == "recursive-path" || s == "rpo") return ReductionOrder::recursive_path;
  throw InputError("unknown reduction order '" + s + "'");
}

namespace rewriting_detail {

inline bool shortlex_greater(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() > v.size();
  return std::lexicographical_compare(v.begin(), v.end(), u.begin(), u.end());
}

// Suffix-pair form; i, j index the first letter of the remaining words.
inline bool rpo_greater(const Word& u, std::size_t i, const Word& v, std::size_t j);

inline bool rpo_geq(const Word& u, std::size_t i, const Word& v, std::size_t j) {
  if (u.size() - i == v.size() - j && std::equal(u.begin() + static_cast<std::ptrdiff_t>(i), u.end(),
                                                 v.begin() + static_cast<std::ptrdiff_t>(j))) {
    return true;
  }
  return rpo_greater(u, i, v, j);
}

inline bool rpo_greater(const Word& u, std::size_t i, const Word& v, std::size_t j) {
  if (i == u.size()) return false;
  if (j == v.size()) return true;
  if (rpo_geq(u, i + 1, v, j)) return true;
  if (u[i] > v[j]) return rpo_greater(u, i, v, j + 1);
  if (u[i] == v[j]) return rpo_greater(u, i + 1, v, j + 1);
  return false;
}

}  // namespace rewriting_detail

inline bool order_greater(ReductionOrder o, const Word& u, const Word& v) {
  return o == ReductionOrder::shortlex ? rewriting_detail::shortlex_greater(u, v)
                                       : rewriting_detail::rpo_greater(u, 0, v, 0);
}

struct Rule {
  Word lhs;
  Word rhs;
};

/// A finite string-rewriting system whose rules all decrease a fixed
/// reduction order, so every rewriting sequence terminates.
class RewritingSystem {
 public:
  RewritingSystem(Alphabet alphabet, std::vector<Rule> rules, ReductionOrder order = ReductionOrder::shortlex)
      : alphabet_(std::move(alphabet)), rules_(std::move(rules)), order_(order) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& r = rules_[i];
      if (r.lhs.empty()) throw InputError("rule " + std::to_string(i + 1) + ": empty left-hand side");
      for (Letter s : r.lhs) check_letter(s);
      for (Letter s : r.rhs) check_letter(s);
      if (!order_greater(order_, r.lhs, r.rhs)) {
        throw InputError("rule " + std::to_string(i + 1) + " (" + format_rule(r) + ") does not decrease the " +
                         to_string(order_) + " order");
      }
      max_lhs_ = std::max(max_lhs_, r.lhs.size());
      index_.emplace(r.lhs, i);  // keeps the first rule for a repeated lhs
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  ReductionOrder order() const noexcept { return order_; }

  std::string format_rule(const Rule& r) const {
    return (r.lhs.empty() ? "e" : alphabet_.format(r.lhs)) + " -> " + (r.rhs.empty() ? "e" : alphabet_.format(r.rhs));
  }

  /// Rewrites to an irreducible word. Letters are shifted onto a stack; after
  /// each shift the shortest reducible suffix is replaced, and the replacement
  /// goes back to the front of the input.
  Word normalize(const Word& w, std::uint64_t step_budget = 10'000'000) const {
    Word out;
    std::vector<Letter> pending(w.rbegin(), w.rend());  // back() is the next letter
    std::uint64_t steps = 0;
    Word key;
    while (!pending.empty()) {
      out.push_back(pending.back());
      pending.pop_back();
      for (std::size_t len = 1; len <= std::min(max_lhs_, out.size()); ++len) {
        key.assign(out.end() - static_cast<std::ptrdiff_t>(len), out.end());
        auto it = index_.find(key);
        if (it == index_.end()) continue;
        if (++steps > step_budget) {
          throw BudgetError("normalize: step budget of " + std::to_string(step_budget) + " exceeded");
        }
        out.resize(out.size() - len);
        const auto& rhs = rules_[it->second].rhs;
        pending.insert(pending.end(), rhs.rbegin(), rhs.rend());
        break;
      }
    }
    return out;
  }

  bool irreducible(const Word& w) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t len = 1; len <= std::min(max_lhs_, w.size() - i); ++len) {
        if (index_.count(Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + len)))) return false;
      }
    }
    return true;
  }

 private:
  void check_letter(Letter s) const {
    if (s >= alphabet_.size()) throw InputError("rule letter outside the alphabet");
  }

  Alphabet alphabet_;
  std::vector<Rule> rules_;
  ReductionOrder order_;
  std::size_t max_lhs_ = 0;
  std::map<Word, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Confluence

enum class ConfluenceStatus { confluent, not_confluent, unknown_budget_exhausted };

inline const char* to_string(ConfluenceStatus s) {
  switch (s) {
    case ConfluenceStatus::confluent:
      return "confluent";
    case ConfluenceStatus::not_confluent:
      return "not_confluent";
    case ConfluenceStatus::unknown_budget_exhausted:
      return "unknown_budget_exhausted";
  }
  return "unknown_budget_exhausted";
}

struct CriticalPair {
  std::size_t rule_a = 0;  // zero-based
  std::size_t rule_b = 0;
  /// Start of rule_b's lhs inside the overlap word.
  std::size_t position = 0;
  bool inclusion = false;
  Word overlap;
  Word reduct_a;
  Word reduct_b;
};

struct ConfluenceReport {
  ConfluenceStatus status = ConfluenceStatus::confluent;
  std::uint64_t pairs_checked = 0;
  std::vector<CriticalPair> unresolved;
};

/// Every overlap of two left-hand sides: a proper suffix of lhs_a equal to a
/// prefix of lhs_b, and lhs_b occurring inside lhs_a. Both one-step reducts
/// are normalized; differing normal forms are unresolved. Pairs are visited in
/// (rule_a, rule_b, position) order.
inline ConfluenceReport critical_pair_check(const RewritingSystem& sys, std::uint64_t budget = 1'000'000) {
  ConfluenceReport rep;
  const auto& rules = sys.rules();
  auto consider = [&](CriticalPair cp) {
    cp.reduct_a = sys.normalize(cp.reduct_a);
    cp.reduct_b = sys.normalize(cp.reduct_b);
    if (cp.reduct_a != cp.reduct_b) rep.unresolved.push_back(std::move(cp));
  };
  for (std::size_t a = 0; a < rules.size(); ++a) {
    const Word& la = rules[a].lhs;
    for (std::size_t b = 0; b < rules.size(); ++b) {
      const Word& lb = rules[b].lhs;
      for (std::size_t pos = 0; pos < la.size(); ++pos) {
        const std::size_t tail = la.size() - pos;
        const bool inclusion = lb.size() <= tail;
        if (inclusion) {
          if (a == b && pos == 0) continue;
          if (!std::equal(lb.begin(), lb.end(), la.begin() + static_cast<std::ptrdiff_t>(pos))) continue;
        } else {
          if (pos == 0) continue;  // lb strictly longer than la, found as inclusion of (b, a)
          if (!std::equal(la.begin() + static_cast<std::ptrdiff_t>(pos), la.end(), lb.begin())) continue;
        }
        if (rep.pairs_checked >= budget) {
          rep.status = ConfluenceStatus::unknown_budget_exhausted;
          return rep;
        }
        ++rep.pairs_checked;
        CriticalPair cp;
        cp.rule_a = a;
        cp.rule_b = b;
        cp.position = pos;
        cp.inclusion = inclusion;
        if (inclusion) {
          cp.overlap = la;
          cp.reduct_a = rules[a].rhs;
          cp.reduct_b.assign(la.begin(), la.begin() + static_cast<std::ptrdiff_t>(pos));
          cp.reduct_b.insert(cp.reduct_b.end(), rules[b].rhs.begin(), rules[b].rhs.end());
          cp.reduct_b.insert(cp.reduct_b.end(), la.begin() + static_cast<std::ptrdiff_t>(pos + lb.size()), la.end());
        } else {
          cp.overlap = la;
          cp.overlap.insert(cp.overlap.end(), lb.begin() + static_cast<std::ptrdiff_t>(tail), lb.end());
          cp.reduct_a = rules[a].rhs;
          cp.reduct_a.insert(cp.reduct_a.end(), lb.begin() + static_cast<std::ptrdiff_t>(tail), lb.end());
          cp.reduct_b.assign(la.begin(), la.begin() + static_cast<std::ptrdiff_t>(pos));
          cp.reduct_b.insert(cp.reduct_b.end(), rules[b].rhs.begin(), rules[b].rhs.end());
        }
        consider(std::move(cp));
      }
    }
  }
  rep.status = rep.unresolved.empty() ? ConfluenceStatus::confluent : ConfluenceStatus::not_confluent;
  return rep;
}

// ---------------------------------------------------------------------------
// Rules files
//
//   # comment
//   alphabet: a a^-1 b b^-1
//   order: shortlex
//   b a -> a b
//   a a^-1 -> e

inline RewritingSystem parse_rules(std::istream& in, const std::string& source = "<rules>") {
  std::optional<Alphabet> alphabet;
  ReductionOrder order = ReductionOrder::shortlex;
  std::vector<Rule> rules;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("alphabet:", 0) == 0) {
      if (alphabet) throw fail("duplicate alphabet header");
      std::istringstream toks(line.substr(9));
      std::vector<std::string> labels;
      for (std::string t; toks >> t;) labels.push_back(t);
      if (labels.empty()) throw fail("empty alphabet");
      try {
        alphabet = Alphabet::from_labels(labels);
      } catch (const InputError& e) {
        throw fail(e.what());
      }
      continue;
    }
    if (line.rfind("order:", 0) == 0) {
      try {
        order = parse_order(trim(line.substr(6)));
      } catch (const InputError& e) {
        throw fail(e.what());
      }
      continue;
    }
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw fail("expected 'lhs -> rhs'");
    if (!alphabet) throw fail("rule before the alphabet header");
    try {
      rules.push_back({alphabet->parse(line.substr(0, arrow)), alphabet->parse(line.substr(arrow + 2))});
    } catch (const InputError& e) {
      throw fail(e.what());
    }
  }
  if (!alphabet) throw InputError(source + ": missing alphabet header");
  return RewritingSystem(*alphabet, std::move(rules), order);
}

inline RewritingSystem load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open rules file " + path);
  return parse_rules(in, path);
}

// ---------------------------------------------------------------------------
// Shipped systems

/// x x^-1 -> e for every letter.
inline RewritingSystem free_reduction_system(const Alphabet& alphabet) {
  std::vector<Rule> rules;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    auto s = static_cast<Letter>(i);
    rules.push_back({{s, alphabet.inverse(s)}, {}});
  }
  return RewritingSystem(alphabet, std::move(rules));
}

/// Z^2 = <a, b | ab = ba>: normal forms a^k b^l.
inline RewritingSystem z2_system() {
  auto alpha = Alphabet::with_inverses({"a", "b"});
  auto w = [&](const char* t) { return alpha.parse(t); };
  std::vector<Rule> rules;
  for (const char* x : {"a", "a^-1", "b", "b^-1"}) {
    Word l = w(x);
    l.push_back(alpha.inverse(l[0]));
    rules.push_back({l, {}});
  }
  for (const char* y : {"b", "b^-1"}) {
    for (const char* x : {"a", "a^-1"}) {
      rules.push_back({w((std::string(y) + " " + x).c_str()), w((std::string(x) + " " + y).c_str())});
    }
  }
  return RewritingSystem(alpha, std::move(rules));
}

/// Heisenberg group <a, b, c | [b, a] = c, c central> over the alphabet
/// c c^-1 a a^-1 b b^-1 with the recursive path order. Normal forms are
/// c^p a^k b^l. No finite shortlex-complete system exists here: every
/// c^p has a shorter spelling as a commutator of powers once |p| is large.
inline RewritingSystem heisenberg_system() {
  auto alpha = Alphabet::from_labels({"c", "c^-1", "a", "a^-1", "b", "b^-1"});
  auto w = [&](const std::string& t) { return alpha.parse(t); };
  std::vector<Rule> rules;
  for (const char* x : {"c", "c^-1", "a", "a^-1", "b", "b^-1"}) {
    Word l = w(x);
    l.push_back(alpha.inverse(l[0]));
    rules.push_back({l, {}});
  }
  for (const char* y : {"a", "a^-1", "b", "b^-1"}) {
    for (const char* z : {"c", "c^-1"}) rules.push_back({w(std::string(y) + " " + z), w(std::string(z) + " " + y)});
  }
  rules.push_back({w("b a"), w("c a b")});
  rules.push_back({w("b a^-1"), w("c^-1 a^-1 b")});
  rules.push_back({w("b^-1 a"), w("c^-1 a b^-1")});
  rules.push_back({w("b^-1 a^-1"), w("c a^-1 b^-1")});
  return RewritingSystem(alpha, std::move(rules), ReductionOrder::recursive_path);
}

}  // namespace reldiv
