#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reldiv/group.hpp"

namespace reldiv {

/// Defining graph of a right-angled Coxeter group: generators s1..sn are
/// involutions, and two distinct generators commute iff they are adjacent.
class CommutationGraph {
 public:
  CommutationGraph() = default;

  /// Edges use 1-based vertex numbers.
  CommutationGraph(int vertices, const std::vector<std::pair<int, int>>& edges)
      : n_(vertices), adj_(static_cast<std::size_t>(vertices), 0) {
    if (vertices < 1 || vertices > 64) throw InputError("RACG: vertex count must be in 1..64");
    for (auto [u, v] : edges) {
      if (u < 1 || v < 1 || u > vertices || v > vertices || u == v) {
        throw InputError("RACG: bad edge " + std::to_string(u) + "-" + std::to_string(v));
      }
      adj_[u - 1] |= std::uint64_t{1} << (v - 1);
      adj_[v - 1] |= std::uint64_t{1} << (u - 1);
      edges_.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  /// The n-cycle s1-s2-...-sn-s1.
  static CommutationGraph cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
    return {n, e};
  }

  int vertices() const noexcept { return n_; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

  /// Distinct adjacent generators commute; a generator does not "commute" with
  /// itself for the purposes of reordering (s s cancels instead).
  bool commute(Letter s, Letter t) const { return s != t && ((adj_[s] >> t) & 1u); }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<std::pair<int, int>> edges_;
};

namespace racg_detail {

/// Appends s to a reduced word, deleting the occurrence of s that can be
/// shuffled to the end if there is one.
inline void push_reduced(const CommutationGraph& g, Word& u, Letter s) {
  for (std::size_t i = u.size(); i-- > 0;) {
    if (u[i] == s) {
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
    if (!g.commute(u[i], s)) break;
  }
  u.push_back(s);
}

/// Lexicographically least reordering of a reduced word by commutations:
/// repeatedly emit the smallest letter with no unemitted non-commuting letter
/// before it.
inline Word lex_least(const CommutationGraph& g, const Word& u) {
  const std::size_t n = u.size();
  if (n > 64) {
    // Long words: quadratic scan without bitmasks.
    Word out;
    std::vector<bool> used(n, false);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        bool free = true;
        for (std::size_t i = 0; i < j && free; ++i) {
          if (!used[i] && !g.commute(u[i], u[j])) free = false;
        }
        if (free && (best == n || u[j] < u[best])) best = j;
      }
      used[best] = true;
      out.push_back(u[best]);
    }
    return out;
  }
  std::uint64_t blockers[64];
  for (std::size_t j = 0; j < n; ++j) {
    blockers[j] = 0;
    for (std::size_t i = 0; i < j; ++i) {
      if (!g.commute(u[i], u[j])) blockers[j] |= std::uint64_t{1} << i;
    }
  }
  std::uint64_t unused = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  Word out;
  out.reserve(n);
  while (unused) {
    std::size_t best = n;
    for (std::uint64_t m = unused; m; m &= m - 1) {
      auto j = static_cast<std::size_t>(__builtin_ctzll(m));
      if ((blockers[j] & unused) == 0 && (best == n || u[j] < u[best])) best = j;
    }
    unused &= ~(std::uint64_t{1} << best);
    out.push_back(u[best]);
  }
  return out;
}

}  // namespace racg_detail

/// Shortlex-least word equal to `w` in the right-angled Coxeter group.
inline Word racg_normal_form(const CommutationGraph& g, const Word& w) {
  Word u;
  for (Letter s : w) {
    if (s >= g.vertices()) throw InputError("RACG: letter outside the alphabet");
    racg_detail::push_reduced(g, u, s);
  }
  return racg_detail::lex_least(g, u);
}

/// Same result by exhaustive search over the local moves (delete `s s`, swap
/// adjacent commuting letters). Exponential; meant for short words and as the
/// reference the fast version is checked against.
inline Word racg_normal_form_exhaustive(const CommutationGraph& g, const Word& w,
                                        std::size_t state_budget = 2'000'000) {
  auto better = [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  };
  std::set<Word> seen{w};
  std::deque<Word> queue{w};
  Word best = w;
  while (!queue.empty()) {
    Word cur = std::move(queue.front());
    queue.pop_front();
    if (better(cur, best)) best = cur;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      Word next;
      if (cur[i] == cur[i + 1]) {
        next = cur;
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(i), next.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else if (g.commute(cur[i], cur[i + 1])) {
        next = cur;
        std::swap(next[i], next[i + 1]);
      } else {
        continue;
      }
      if (seen.insert(next).second) {
        if (seen.size() > state_budget) throw BudgetError("RACG exhaustive normal form: state budget exceeded");
        queue.push_back(std::move(next));
      }
    }
  }
  return best;
}

/// Right-angled Coxeter group oracle; elements are shortlex normal forms, one
/// byte per letter.
class RightAngledCoxeterGroup {
 public:
  explicit RightAngledCoxeterGroup(CommutationGraph graph) : graph_(std::move(graph)) {
    std::vector<std::string> labels;
    for (int i = 1; i <= graph_.vertices(); ++i) labels.push_back("s" + std::to_string(i));
    alphabet_ = Alphabet::involutions(std::move(labels));
  }

  const CommutationGraph& graph() const noexcept { return graph_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  Element identity() const { return {}; }

  Element multiply(const Element& x, Letter s) const {
    if (s >= alphabet_.size()) throw InputError("RACG: letter outside the alphabet");
    Word u(x.begin(), x.end());
    racg_detail::push_reduced(graph_, u, s);
    Word nf = racg_detail::lex_least(graph_, u);
    return Element(nf.begin(), nf.end());
  }

  std::string describe(const Element& x) const {
    return x.empty() ? "e" : alphabet_.format(Word(x.begin(), x.end()));
  }

  std::string signature() const {
    std::string sig = "racg:n=" + std::to_string(graph_.vertices()) + ";edges=";
    for (auto [u, v] : graph_.edges()) sig += std::to_string(u) + "-" + std::to_string(v) + ",";
    return sig;
  }

  static Word to_word(const Element& x) { return Word(x.begin(), x.end()); }

 private:
  CommutationGraph graph_;
  Alphabet alphabet_;
};

}  // namespace reldiv
