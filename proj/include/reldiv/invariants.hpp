#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reldiv/ball.hpp"
#include "reldiv/search.hpp"
#include "reldiv/subgroup.hpp"

namespace reldiv {

// ---------------------------------------------------------------------------
// Distortion

/// One value of Dist^H_G or dist^H_G with the element realising it.
struct DistortionValue {
  int r = 0;
  std::uint64_t value = 0;
  std::optional<Element> witness;
  std::uint64_t witness_ambient_length = 0;
  std::string note;
};

/// Max |h|_T over h in H with |h|_S <= r. Intrinsic lengths come from a BFS
/// in H's own Cayley graph over its generating words.
template <GroupOracle G>
DistortionValue upper_distortion(const G& group, const AnnotatedBall& a, const SubgroupSpec& spec, int r,
                                 std::size_t walk_budget = 5'000'000) {
  const auto& ball = a.base();
  if (r < 0 || r > ball.radius) throw RadiusError("upper_distortion: r exceeds the atlas radius", r);
  std::vector<Id> members;
  for (Id i = 0; i < ball.count_within(r); ++i) {
    if (a.member[i]) members.push_back(i);
  }
  DistortionValue out;
  out.r = r;
  if (members.size() == 1) {
    out.value = 0;
    out.witness = Element(ball.element(0));
    out.note = "H meets B(e,r) only in the identity";
    return out;
  }
  SubgroupWalk<G> walk(group, spec.generating_words, walk_budget);
  std::size_t found = 0;
  std::vector<std::uint8_t> seen(members.size(), 0);
  auto scan = [&] {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!seen[i] && walk.length_of(Element(ball.element(members[i])))) {
        seen[i] = 1;
        ++found;
      }
    }
  };
  scan();
  while (found < members.size()) {
    if (!walk.advance()) throw ConfigError("upper_distortion: members of B(e,r) not generated by the subgroup's generating words");
    scan();
  }
  for (Id id : members) {
    Element h(ball.element(id));
    auto t = *walk.length_of(h);
    if (!out.witness || t > out.value) {
      out.value = t;
      out.witness = h;
      out.witness_ambient_length = ball.word_length[id];
    }
  }
  return out;
}

/// Min |h|_T over h in H with |h|_S >= r (0 when that set is empty, which can
/// only be certified for finite H). Elements outside the atlas have
/// |h|_S >= R + 1, so the answer is certified whenever R + 1 >= r.
template <GroupOracle G>
DistortionValue lower_distortion(const G& group, const AnnotatedBall& a, const SubgroupSpec& spec, int r,
                                 std::size_t walk_budget = 5'000'000) {
  const auto& ball = a.base();
  DistortionValue out;
  out.r = r;
  SubgroupWalk<G> walk(group, spec.generating_words, walk_budget);
  while (true) {
    for (const auto& h : walk.layer()) {
      auto id = ball.find(h);
      if (id && ball.word_length[*id] >= r) {
        out.value = walk.depth();
        out.witness = h;
        out.witness_ambient_length = ball.word_length[*id];
        return out;
      }
      if (!id) {
        if (ball.radius + 1 < r) {
          throw RadiusError("lower_distortion: needs larger radius (an element of H leaves the atlas before |h|_S >= r is decidable)",
                            r - 1);
        }
        out.value = walk.depth();
        out.witness = h;
        out.witness_ambient_length = static_cast<std::uint64_t>(ball.radius) + 1;
        out.note = "witness lies outside the atlas; |h|_S >= R+1";
        return out;
      }
    }
    if (!walk.advance()) {
      out.value = 0;
      out.note = "H is finite and has no element with |h|_S >= r";
      return out;
    }
  }
}

struct DistortionRow {
  int r = 0;
  DistortionValue upper;
  DistortionValue lower;
};

template <GroupOracle G>
std::vector<DistortionRow> distortion_table(const G& group, const AnnotatedBall& a, const SubgroupSpec& spec,
                                            const std::vector<int>& radii) {
  std::vector<DistortionRow> rows;
  for (int r : radii) rows.push_back({r, upper_distortion(group, a, spec, r), lower_distortion(group, a, spec, r)});
  return rows;
}

// ---------------------------------------------------------------------------
// Growth

/// |B(e, r)|.
inline std::uint64_t growth(const BallIndex& ball, int r) { return ball.count_within(r); }

struct DominationCheck {
  bool holds = true;
  std::vector<int> failing_radii;
};

/// dist^H_G(r) <= Growth_G(2r) at every sampled r.
inline DominationCheck growth_dominates_lower_distortion_check(const BallIndex& ball,
                                                               const std::vector<DistortionValue>& lower) {
  DominationCheck out;
  for (const auto& v : lower) {
    if (v.value > growth(ball, 2 * v.r)) {
      out.holds = false;
      out.failing_radii.push_back(v.r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtered ends

struct EndsRow {
  int r = 0;
  /// Deep-component estimate at the largest atlas radius that certifies r.
  std::size_t estimate = 0;
  int frontier_radius = 0;
  /// Same estimate at the two largest usable atlas radii.
  bool stabilized = false;
  /// (R, estimate) for every usable atlas, in increasing R.
  std::vector<std::pair<int, std::size_t>> series;
};

struct EndsProfile {
  std::vector<EndsRow> rows;

  /// Largest per-r estimate (the filtered-ends count is a supremum over r).
  std::size_t estimate() const {
    std::size_t best = 0;
    for (const auto& row : rows) best = std::max(best, row.estimate);
    return best;
  }

  bool stabilized() const {
    for (const auto& row : rows) {
      if (row.estimate == estimate() && row.stabilized) return true;
    }
    return rows.empty();
  }
};

/// Atlases must be annotated for the same subgroup; they are sorted by radius.
inline EndsProfile filtered_ends_profile(std::vector<const AnnotatedBall*> atlases, const std::vector<int>& radii) {
  std::sort(atlases.begin(), atlases.end(), [](auto* x, auto* y) { return x->radius() < y->radius(); });
  EndsProfile profile;
  if (atlases.empty()) return profile;
  for (int r : radii) {
    if (r > atlases.back()->valid_core) {
      throw RadiusError("filtered_ends_profile: r=" + std::to_string(r) + " exceeds the largest atlas core",
                        atlases.back()->source == DistanceSource::bfs ? 2 * r : r);
    }
    EndsRow row;
    row.r = r;
    for (const auto* a : atlases) {
      if (r > a->valid_core) continue;
      row.series.emplace_back(a->radius(), complement_components(*a, r).deep_count());
    }
    row.estimate = row.series.back().second;
    row.frontier_radius = row.series.back().first;
    row.stabilized = row.series.size() >= 2 && row.series[row.series.size() - 2].second == row.estimate;
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Perpendicular rays

/// A path e = g_0, g_1, ..., g_L with dist_to_H(g_i) = i, found by growing
/// the set of elements reachable from e along strictly H-receding steps and
/// backtracking from its first element at depth L. Such a path is a geodesic.
inline std::vector<Id> perpendicular_ray_prefix(const AnnotatedBall& a, int length) {
  if (length < 0) throw InputError("ray length must be non-negative");
  if (length > a.valid_core) {
    throw RadiusError("perpendicular_ray_prefix: length exceeds the certified core",
                      a.source == DistanceSource::bfs ? 2 * length : length);
  }
  const auto& ball = a.base();
  if (a.dist_to_h[0] != 0) throw ConfigError("identity is not in H");
  std::vector<std::vector<Id>> layers{{0}};
  std::vector<Id> parent(ball.size(), kNoElement);
  std::vector<std::uint8_t> reached(ball.size(), 0);
  reached[0] = 1;
  for (int i = 1; i <= length; ++i) {
    std::vector<Id> next;
    for (Id x : layers.back()) {
      for (std::size_t s = 0; s < ball.generator_count; ++s) {
        Id y = ball.neighbor(x, static_cast<Letter>(s));
        if (y == kNoElement || reached[y] || a.dist_to_h[y] != static_cast<std::uint32_t>(i)) continue;
        if (ball.word_length[y] > a.valid_core) continue;
        reached[y] = 1;
        parent[y] = x;
        next.push_back(y);
      }
    }
    if (next.empty()) {
      throw RadiusError("perpendicular_ray_prefix: no H-perpendicular prefix of length " + std::to_string(length) +
                            " inside the core (needs larger radius, or H has finite index)",
                        a.source == DistanceSource::bfs ? 2 * (length + 1) : length + 1);
    }
    std::sort(next.begin(), next.end());
    layers.push_back(std::move(next));
  }
  std::vector<Id> path;
  for (Id cur = layers.back().front(); cur != kNoElement; cur = parent[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Quasigeodesics

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "true";
    case Verdict::no:
      return "false";
    case Verdict::unknown:
      return "unknown";
  }
  return "unknown";
}

/// Checks len(q) <= L * d(q+, q-) + C for every subpath q of the path that
/// starts anywhere and follows `labels`. Endpoint distances are word lengths
/// of the segment elements, exact inside the atlas; outside it only the bound
/// d >= R + 1 is available, and a subpath needing more is "unknown".
template <GroupOracle G>
Verdict quasigeodesic_check(const G& group, const BallIndex& ball, const Word& labels, double L, double C) {
  bool unknown = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Element seg = group.identity();
    for (std::size_t j = i; j < labels.size(); ++j) {
      seg = group.multiply(seg, labels[j]);
      const double len = static_cast<double>(j - i + 1);
      if (auto id = ball.find(seg)) {
        if (len > L * ball.word_length[*id] + C) return Verdict::no;
      } else if (len > L * (ball.radius + 1) + C) {
        unknown = true;
      }
    }
  }
  return unknown ? Verdict::unknown : Verdict::yes;
}

}  // namespace reldiv
