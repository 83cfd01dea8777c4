#pragma once

// Brute-force reference implementations used by the tests. None of these go
// through the library's group oracles or ball machinery.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "reldiv/encoding.hpp"

namespace oracle {

using reldiv::BigInt;

// --- Heisenberg group as 3x3 upper unitriangular integer matrices ----------
// [[1, x, z], [0, 1, y], [0, 0, 1]], written M(x, y, z).
struct Mat {
  BigInt x = 0, y = 0, z = 0;
  Mat operator*(const Mat& o) const { return {x + o.x, y + o.y, z + o.z + x * o.y}; }
  bool operator==(const Mat&) const = default;
};

/// a = M(0,1,0), b = M(1,0,0), c = M(0,0,1); then a^k b^l c^p = M(l, k, p).
/// Letters follow the alphabet order a, a^-1, b, b^-1, c, c^-1.
inline Mat heisenberg_letter(std::uint8_t s) {
  switch (s) {
    case 0: return {0, 1, 0};
    case 1: return {0, -1, 0};
    case 2: return {1, 0, 0};
    case 3: return {-1, 0, 0};
    case 4: return {0, 0, 1};
    default: return {0, 0, -1};
  }
}

inline Mat heisenberg_word(const std::vector<std::uint8_t>& w) {
  Mat m;
  for (auto s : w) m = m * heisenberg_letter(s);
  return m;
}

/// Word lengths over {a, b} (or {a, b, c}) of every element within `radius`,
/// keyed by (k, l, p), by plain BFS with matrix products and int64 keys.
inline std::map<std::array<long long, 3>, int> heisenberg_lengths(int radius, bool include_c) {
  using Key = std::array<long long, 3>;
  const std::vector<std::array<long long, 3>> gens_xyz = include_c
      ? std::vector<std::array<long long, 3>>{{0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1}}
      : std::vector<std::array<long long, 3>>{{0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}};
  std::map<Key, int> dist;  // key is (x, y, z) = (l, k, p) of the matrix
  std::deque<Key> q;
  dist[{0, 0, 0}] = 0;
  q.push_back({0, 0, 0});
  while (!q.empty()) {
    Key m = q.front();
    q.pop_front();
    int d = dist[m];
    if (d == radius) continue;
    for (const auto& g : gens_xyz) {
      Key n{m[0] + g[0], m[1] + g[1], m[2] + g[2] + m[0] * g[1]};
      if (dist.emplace(n, d + 1).second) q.push_back(n);
    }
  }
  std::map<Key, int> out;  // rekey as (k, l, p)
  for (auto& [m, d] : dist) out[{m[1], m[0], m[2]}] = d;
  return out;
}

// --- Z^2 lattice ------------------------------------------------------------

using Point = std::pair<long long, long long>;

inline long long l1(Point p) { return std::llabs(p.first) + std::llabs(p.second); }

/// BFS distances from x inside a finite vertex set of Z^2 given by a
/// predicate, clipped to the square |coords| <= window.
template <class Allowed>
std::map<Point, long long> grid_bfs(Point x, Allowed allowed, long long window) {
  std::map<Point, long long> dist;
  if (!allowed(x)) return dist;
  dist[x] = 0;
  std::deque<Point> q{x};
  const Point steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!q.empty()) {
    Point p = q.front();
    q.pop_front();
    for (auto [dx, dy] : steps) {
      Point n{p.first + dx, p.second + dy};
      if (std::llabs(n.first) > window || std::llabs(n.second) > window || !allowed(n)) continue;
      if (dist.emplace(n, dist[p] + 1).second) q.push_back(n);
    }
  }
  return dist;
}

template <class Allowed>
std::optional<long long> grid_distance(Point x, Point y, Allowed allowed, long long window) {
  auto d = grid_bfs(x, allowed, window);
  auto it = d.find(y);
  if (it == d.end()) return std::nullopt;
  return it->second;
}

inline long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

/// Upper / lower relative divergence of the x-axis in Z^2 by brute force over
/// all boundary pairs with |x1| <= span, without coset reduction. Returns
/// (delta, sigma); sigma nullopt means infinity.
struct GridDivergence {
  long long delta = 0;
  std::optional<long long> sigma;
};

inline GridDivergence grid_axis_subgroup_divergence(long long rho_num, long long rho_den, long long n, long long r) {
  const long long level = ceil_div(rho_num * r, rho_den);
  const long long span = n * r + 2;
  const long long window = 4 * n * r + 4 * r + 8;
  auto in_complement_r = [&](Point p) { return std::llabs(p.second) >= r; };
  auto in_complement_level = [&](Point p) { return std::llabs(p.second) >= level; };
  GridDivergence out;
  std::vector<Point> boundary;
  for (long long t = -2 * span; t <= 2 * span; ++t) {
    boundary.push_back({t, r});
    boundary.push_back({t, -r});
  }
  for (long long s = -span; s <= span; ++s) {
    for (Point x : {Point{s, r}, Point{s, -r}}) {
      auto reach = grid_bfs(x, in_complement_r, window);
      auto dl = grid_bfs(x, in_complement_level, window);
      for (Point y : boundary) {
        long long d = std::llabs(x.first - y.first) + std::llabs(x.second - y.second);
        if (!reach.count(y) || !dl.count(y)) continue;
        long long c = dl.at(y);
        if (d <= n * r) out.delta = std::max(out.delta, c);
        if (d >= n * r && (!out.sigma || c < *out.sigma)) out.sigma = c;
      }
    }
  }
  return out;
}

/// Axis divergence of <a> in Z^2: shortest path from (-(r+1), 0) to (r+1, 0)
/// avoiding the closed L1 ball of radius r.
inline std::optional<long long> grid_axis_divergence(long long r) {
  return grid_distance({-(r + 1), 0}, {r + 1, 0}, [&](Point p) { return l1(p) > r; }, 4 * r + 8);
}

// --- free group ------------------------------------------------------------

/// All freely reduced words of length <= radius over rank generators; letters
/// 2i and 2i+1 are mutually inverse.
inline std::vector<std::vector<std::uint8_t>> reduced_words(int rank, int radius) {
  std::vector<std::vector<std::uint8_t>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == radius) continue;
    for (int s = 0; s < 2 * rank; ++s) {
      if (!out[i].empty() && (out[i].back() ^ 1) == s) continue;
      auto w = out[i];
      w.push_back(static_cast<std::uint8_t>(s));
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace oracle
