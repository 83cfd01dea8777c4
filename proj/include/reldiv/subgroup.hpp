#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reldiv/group.hpp"
#include "reldiv/groups/free_abelian.hpp"
#include "reldiv/groups/free_group.hpp"
#include "reldiv/groups/heisenberg.hpp"

namespace reldiv {

/// A subgroup H: membership test, generating words and, when a closed form is
/// known, the exact distance d_S(x, H).
struct SubgroupSpec {
  std::vector<Word> generating_words;
  std::function<bool(const Element&)> member;
  std::function<std::uint64_t(const Element&)> exact_distance;
  std::string description;

  bool has_exact_distance() const noexcept { return static_cast<bool>(exact_distance); }
};

/// Closed-form d_S(x, H) when the subgroup carries one; empty means "use BFS".
inline std::optional<std::uint64_t> subgroup_distance_oracle(const SubgroupSpec& spec, const Element& x) {
  if (!spec.exact_distance) return std::nullopt;
  return spec.exact_distance(x);
}

/// Breadth-first walk of H's own Cayley graph over its generating words and
/// their inverses. Layer t holds the elements with |h|_T = t.
template <GroupOracle G>
class SubgroupWalk {
 public:
  SubgroupWalk(G group, std::vector<Word> generating_words, std::size_t budget = 5'000'000)
      : group_(std::move(group)), budget_(budget) {
    for (const auto& w : generating_words) {
      steps_.push_back(w);
      steps_.push_back(group_.alphabet().invert(w));
    }
    Element e = group_.identity();
    lengths_.emplace(e, 0);
    layer_.push_back(std::move(e));
  }

  const std::vector<Element>& layer() const noexcept { return layer_; }
  std::uint64_t depth() const noexcept { return depth_; }
  std::size_t visited() const noexcept { return lengths_.size(); }
  bool exhausted() const noexcept { return layer_.empty(); }

  /// Moves to the next layer. Returns false once H has been exhausted.
  bool advance() {
    std::vector<Element> next;
    for (const auto& h : layer_) {
      for (const auto& w : steps_) {
        Element y = right_multiply(group_, h, w);
        if (lengths_.emplace(y, depth_ + 1).second) {
          if (lengths_.size() > budget_) throw BudgetError("subgroup walk: element budget exceeded");
          next.push_back(std::move(y));
        }
      }
    }
    layer_ = std::move(next);
    ++depth_;
    return !layer_.empty();
  }

  std::optional<std::uint64_t> length_of(const Element& h) const {
    auto it = lengths_.find(h);
    if (it == lengths_.end()) return std::nullopt;
    return it->second;
  }

 private:
  G group_;
  std::size_t budget_;
  std::vector<Word> steps_;
  std::unordered_map<Element, std::uint64_t> lengths_;
  std::vector<Element> layer_;
  std::uint64_t depth_ = 0;
};

/// H = <c> in the Heisenberg group, with d_S(a^k b^l c^p, H) = |k| + |l|.
/// For the {a, b} generating set c is the word b a b^-1 a^-1.
inline SubgroupSpec heisenberg_center_subgroup(const HeisenbergGroup& g) {
  SubgroupSpec spec;
  spec.generating_words.push_back(g.alphabet().parse(g.includes_c() ? "c" : "b a b^-1 a^-1"));
  spec.member = [](const Element& x) {
    auto t = HeisenbergGroup::decode(x);
    return t.k == 0 && t.l == 0;
  };
  spec.exact_distance = [](const Element& x) {
    auto t = HeisenbergGroup::decode(x);
    BigInt d = abs(t.k) + abs(t.l);
    return static_cast<std::uint64_t>(d);
  };
  spec.description = "heisenberg-center";
  return spec;
}

/// H spanned by a subset of the coordinate axes of Z^d; the distance to H is
/// the L1 norm of the remaining coordinates.
inline SubgroupSpec zd_coordinate_subgroup(const FreeAbelianGroup& g, const std::vector<int>& axes) {
  SubgroupSpec spec;
  std::vector<bool> in_h(static_cast<std::size_t>(g.dimension()), false);
  for (int axis : axes) {
    if (axis < 0 || axis >= g.dimension()) throw ConfigError("zd-coordinates: axis out of range");
    in_h[axis] = true;
    spec.generating_words.push_back(Word{static_cast<Letter>(2 * axis)});
  }
  spec.member = [g, in_h](const Element& x) {
    auto v = g.decode(x);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!in_h[i] && v[i] != 0) return false;
    }
    return true;
  };
  spec.exact_distance = [g, in_h](const Element& x) {
    auto v = g.decode(x);
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!in_h[i]) d += static_cast<std::uint64_t>(v[i] < 0 ? -v[i] : v[i]);
    }
    return d;
  };
  spec.description = "zd-coordinates";
  return spec;
}

/// Integer row echelon form of a set of lattice generators; membership of a
/// vector in the lattice they span.
class LatticeBasis {
 public:
  LatticeBasis(std::vector<std::vector<std::int64_t>> rows, std::size_t dim) : dim_(dim) {
    std::size_t top = 0;
    for (std::size_t col = 0; col < dim && top < rows.size(); ++col) {
      // Euclid on column `col` among rows[top..]
      while (true) {
        std::size_t pivot = rows.size();
        for (std::size_t i = top; i < rows.size(); ++i) {
          if (rows[i][col] != 0 && (pivot == rows.size() || std::abs(rows[i][col]) < std::abs(rows[pivot][col]))) {
            pivot = i;
          }
        }
        if (pivot == rows.size()) break;
        std::swap(rows[top], rows[pivot]);
        bool done = true;
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          std::int64_t q = rows[i][col] / rows[top][col];
          for (std::size_t j = col; j < dim; ++j) rows[i][j] -= q * rows[top][j];
          if (rows[i][col] != 0) done = false;
        }
        if (done) {
          pivots_.push_back(col);
          basis_.push_back(rows[top]);
          ++top;
          break;
        }
      }
    }
  }

  bool contains(std::vector<std::int64_t> v) const {
    if (v.size() != dim_) return false;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      std::size_t col = pivots_[i];
      // Columns before the pivot are already zero.
      for (std::size_t c = (i == 0 ? 0 : pivots_[i - 1] + 1); c < col; ++c) {
        if (v[c] != 0) return false;
      }
      if (v[col] % basis_[i][col] != 0) return false;
      std::int64_t q = v[col] / basis_[i][col];
      for (std::size_t j = col; j < dim_; ++j) v[j] -= q * basis_[i][j];
    }
    return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
  }

  std::size_t rank() const noexcept { return basis_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::int64_t>> basis_;
};

/// Subgroup of Z^d generated by arbitrary words; exact lattice membership.
inline SubgroupSpec zd_lattice_subgroup(const FreeAbelianGroup& g, std::vector<Word> words) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& w : words) rows.push_back(g.decode(word_to_element(g, w)));
  auto lattice = std::make_shared<LatticeBasis>(rows, static_cast<std::size_t>(g.dimension()));
  SubgroupSpec spec;
  spec.generating_words = std::move(words);
  spec.member = [g, lattice](const Element& x) { return lattice->contains(g.decode(x)); };
  spec.description = "zd-lattice";
  return spec;
}

/// Folded core graph of a finitely generated subgroup of a free group;
/// a reduced word lies in H iff it reads a closed loop at the base vertex.
class FoldedGraph {
 public:
  FoldedGraph(const FreeGroup& g, const std::vector<Word>& words) : alphabet_(g.alphabet()) {
    add_vertex();
    for (const auto& w : words) {
      Word r = FreeGroup::to_word(word_to_element(g, w));
      if (r.empty()) continue;
      int cur = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        int next = (i + 1 == r.size()) ? 0 : add_vertex();
        add_edge(cur, r[i], next);
        cur = next;
      }
    }
    fold();
  }

  bool accepts(const Word& reduced) const {
    int cur = 0;
    for (Letter s : reduced) {
      auto it = out_[static_cast<std::size_t>(cur)].find(s);
      if (it == out_[static_cast<std::size_t>(cur)].end()) return false;
      cur = it->second;
    }
    return cur == 0;
  }

 private:
  int add_vertex() {
    out_.emplace_back();
    return static_cast<int>(out_.size()) - 1;
  }

  void add_edge(int u, Letter s, int v) {
    pending_.push_back({u, s, v});
    pending_.push_back({v, alphabet_.inverse(s), u});
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }

  void fold() {
    parent_.resize(out_.size());
    std::iota(parent_.begin(), parent_.end(), 0);
    std::vector<std::map<Letter, int>> adj(out_.size());
    std::vector<std::pair<int, int>> merges;
    auto insert = [&](int u, Letter s, int v) {
      auto [it, fresh] = adj[static_cast<std::size_t>(u)].emplace(s, v);
      if (!fresh && find(it->second) != find(v)) merges.emplace_back(it->second, v);
    };
    for (auto [u, s, v] : pending_) insert(u, s, v);
    while (!merges.empty()) {
      auto [x, y] = merges.back();
      merges.pop_back();
      int rx = find(x), ry = find(y);
      if (rx == ry) continue;
      if (ry == 0) std::swap(rx, ry);  // keep the base vertex as representative
      parent_[static_cast<std::size_t>(ry)] = rx;
      auto moved = std::move(adj[static_cast<std::size_t>(ry)]);
      adj[static_cast<std::size_t>(ry)].clear();
      for (auto [s, v] : moved) insert(rx, s, v);
    }
    out_.assign(out_.size(), {});
    for (std::size_t u = 0; u < adj.size(); ++u) {
      for (auto [s, v] : adj[u]) out_[static_cast<std::size_t>(find(static_cast<int>(u)))][s] = find(v);
    }
  }

  struct PendingEdge {
    int from;
    Letter letter;
    int to;
  };

  Alphabet alphabet_;
  std::vector<std::map<Letter, int>> out_;
  std::vector<PendingEdge> pending_;
  std::vector<int> parent_;
};

/// Subgroup of a free group; exact membership by folding.
inline SubgroupSpec free_subgroup(const FreeGroup& g, std::vector<Word> words) {
  auto graph = std::make_shared<FoldedGraph>(g, words);
  SubgroupSpec spec;
  spec.generating_words = std::move(words);
  spec.member = [graph](const Element& x) { return graph->accepts(FreeGroup::to_word(x)); };
  spec.description = "free-folded";
  return spec;
}

/// Membership by enumerating H up to intrinsic length `t_radius`. Exact for
/// every member h with |h|_T <= t_radius; for undistorted subgroups whose
/// generating words have length >= 1 this covers B(e, t_radius).
template <GroupOracle G>
SubgroupSpec enumerated_subgroup(const G& group, std::vector<Word> words, std::uint64_t t_radius,
                                 std::size_t budget = 5'000'000) {
  SubgroupWalk<G> walk(group, words, budget);
  auto members = std::make_shared<std::unordered_set<Element>>();
  members->insert(walk.layer().begin(), walk.layer().end());
  while (walk.depth() < t_radius && walk.advance()) members->insert(walk.layer().begin(), walk.layer().end());
  SubgroupSpec spec;
  spec.generating_words = std::move(words);
  spec.member = [members](const Element& x) { return members->count(x) > 0; };
  spec.description = "enumerated(t<=" + std::to_string(t_radius) + ")";
  return spec;
}

}  // namespace reldiv
