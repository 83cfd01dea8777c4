#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "reldiv/ball.hpp"
#include "reldiv/parallel.hpp"
#include "reldiv/search.hpp"

namespace reldiv {

/// rho = num/den in (0, 1], n >= 2, r >= 1.
struct DivergenceParams {
  std::int64_t rho_num = 1;
  std::int64_t rho_den = 2;
  int n = 2;
  int r = 1;

  /// The complement level ceil(rho * r) used for path lengths.
  int level() const { return static_cast<int>((rho_num * r + rho_den - 1) / rho_den); }

  void validate() const {
    if (rho_den <= 0 || rho_num <= 0 || rho_num > rho_den) throw InputError("rho must lie in (0, 1]");
    if (n < 2) throw InputError("n must be at least 2");
    if (r < 1) throw InputError("r must be positive");
  }
};

enum class DivergenceKind { upper, lower, axis };
enum class Certification { interior_certified, frontier_limited };

inline const char* to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::upper:
      return "upper";
    case DivergenceKind::lower:
      return "lower";
    case DivergenceKind::axis:
      return "axis";
  }
  return "?";
}

inline const char* to_string(Certification c) {
  return c == Certification::interior_certified ? "interior_certified" : "frontier_limited";
}

/// One evaluation of delta^n_rho(r), sigma^n_rho(r) or div_alpha(r).
struct DivergenceSample {
  DivergenceParams params;
  DivergenceKind kind = DivergenceKind::upper;
  /// Empty means infinity.
  std::optional<std::uint64_t> value;
  std::uint64_t pair_count = 0;
  Certification flag = Certification::interior_certified;
  /// Pair evaluation stopped at the pair budget.
  bool pruned = false;
  std::optional<std::pair<Id, Id>> witness_pair;
  std::vector<Id> witness_path;
  std::string note;

  bool infinite() const noexcept { return !value.has_value(); }
};

/// d_s(x, y) inside the atlas together with its certification.
struct ComplementDistance {
  std::optional<std::uint64_t> value;
  Certification flag = Certification::interior_certified;
  std::vector<Id> path;
};

namespace divergence_detail {

inline void require_core(const AnnotatedBall& a, int needed, const char* what) {
  if (needed > a.valid_core) {
    throw RadiusError(std::string(what) + ": atlas core " + std::to_string(a.valid_core) + " is too small, need " +
                          std::to_string(needed),
                      a.source == DistanceSource::bfs ? 2 * needed : needed);
  }
}

/// S(e, r) ∩ ∂N_r(H): every pair (x, y) can be translated by an element of H
/// so that x lands here, and left translation by H preserves every level set.
inline std::vector<Id> coset_representatives(const AnnotatedBall& a, int r) {
  const auto& ball = a.base();
  std::vector<Id> out;
  for (Id i = ball.layer_start[static_cast<std::size_t>(r)]; i < ball.layer_start[static_cast<std::size_t>(r) + 1]; ++i) {
    if (a.dist_to_h[i] == static_cast<std::uint32_t>(r)) out.push_back(i);
  }
  return out;
}

inline bool certified(const BallIndex& ball, std::uint64_t value, Id x, Id y) {
  return value + std::max(ball.word_length[x], ball.word_length[y]) <= static_cast<std::uint64_t>(ball.radius);
}

struct PairResult {
  Id x = kNoElement;
  Id y = kNoElement;
  std::uint64_t value = 0;
  bool certified = true;
};

struct SourceResult {
  std::vector<PairResult> pairs;
  std::vector<Id> best_path;
  std::size_t best_index = 0;
  std::uint64_t ambiguous = 0;
};

}  // namespace divergence_detail

/// BFS distance between x and y inside {dist_to_H >= s} ∩ atlas. The value is
/// certified when value <= R - max(|x|, |y|): a shorter path through the
/// outside of the atlas would have to be longer than that. An infinite answer
/// is certified only when the component of x does not reach the frontier.
inline ComplementDistance complement_distance(const AnnotatedBall& a, int s, Id x, Id y) {
  divergence_detail::require_core(a, s, "complement_distance");
  if (a.dist_to_h[x] < static_cast<std::uint32_t>(s) || a.dist_to_h[y] < static_cast<std::uint32_t>(s)) {
    throw InputError("complement_distance: endpoints must satisfy dist_to_H >= s");
  }
  const auto& ball = a.base();
  const auto level = static_cast<std::uint32_t>(s);
  BallSearch search(ball);
  ComplementDistance out;
  bool frontier = false;
  const Id frontier_start = ball.layer_start[static_cast<std::size_t>(ball.radius)];
  search.run({x}, [&](Id v) { return a.dist_to_h[v] >= level; }, kInfinite, [&](Id v, std::uint32_t) {
    if (v >= frontier_start) frontier = true;
    return v != y;
  });
  if (search.distance(y) == kInfinite) {
    out.flag = frontier ? Certification::frontier_limited : Certification::interior_certified;
    return out;
  }
  out.value = search.distance(y);
  out.path = search.path_to(y);
  out.flag = divergence_detail::certified(ball, *out.value, x, y) ? Certification::interior_certified
                                                                  : Certification::frontier_limited;
  return out;
}

struct DivergenceOptions {
  std::uint64_t pair_budget = 50'000'000;
  unsigned threads = 1;
};

/// delta^n_rho(r): sup of d_{ceil(rho r)}(x, y) over x, y in ∂N_r(H) with
/// d_S(x, y) <= n r and x, y joined inside C_r(H). x ranges over
/// S(e, r) ∩ ∂N_r(H) only. The supremum of the empty set is reported as 0.
inline DivergenceSample upper_divergence_sample(const AnnotatedBall& a, const DivergenceParams& p,
                                                const DivergenceOptions& opt = {}) {
  using namespace divergence_detail;
  p.validate();
  const int r = p.r;
  require_core(a, r + p.n * r, "upper_divergence_sample");
  const auto& ball = a.base();
  const auto sources = coset_representatives(a, r);
  const auto level_r = complement_components(a, r);
  const auto s = static_cast<std::uint32_t>(p.level());
  const auto radius_r = static_cast<std::uint32_t>(r);
  const auto reach = static_cast<std::uint32_t>(p.n * r);

  std::vector<SourceResult> results(sources.size());
  unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(sources.size())));
  std::vector<BallSearch> ambient(workers, BallSearch(ball));
  std::vector<BallSearch> complement(workers, BallSearch(ball));
  parallel_chunks(sources.size(), workers, [&](std::size_t w, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Id x = sources[i];
      const Id comp = level_r.component_id[x];
      std::vector<Id> candidates;
      ambient[w].run({x}, [](Id) { return true; }, reach, [&](Id y, std::uint32_t) {
        if (a.dist_to_h[y] == radius_r && level_r.component_id[y] == comp) candidates.push_back(y);
        return true;
      });
      std::sort(candidates.begin(), candidates.end());
      std::size_t remaining = candidates.size();
      auto& search = complement[w];
      search.run({x}, [&](Id v) { return a.dist_to_h[v] >= s; }, kInfinite, [&](Id v, std::uint32_t) {
        auto it = std::lower_bound(candidates.begin(), candidates.end(), v);
        if (it != candidates.end() && *it == v) --remaining;
        return remaining > 0;
      });
      auto& res = results[i];
      for (Id y : candidates) {
        auto d = search.distance(y);
        res.pairs.push_back({x, y, d, certified(ball, d, x, y)});
      }
      // Witness path for this source's best pair (first maximum in y order).
      std::size_t best = 0;
      for (std::size_t k = 1; k < res.pairs.size(); ++k) {
        if (res.pairs[k].value > res.pairs[best].value) best = k;
      }
      if (!res.pairs.empty()) {
        res.best_index = best;
        res.best_path = search.path_to(res.pairs[best].y);
      }
    }
  });

  DivergenceSample out;
  out.params = p;
  out.kind = DivergenceKind::upper;
  std::uint64_t best = 0;
  bool have = false;
  for (std::size_t i = 0; i < results.size() && !out.pruned; ++i) {
    const auto& res = results[i];
    for (std::size_t k = 0; k < res.pairs.size(); ++k) {
      if (out.pair_count >= opt.pair_budget) {
        out.pruned = true;
        break;
      }
      const auto& pr = res.pairs[k];
      ++out.pair_count;
      if (!pr.certified) out.flag = Certification::frontier_limited;
      if (!have || pr.value > best) {
        have = true;
        best = pr.value;
        out.witness_pair = {pr.x, pr.y};
        out.witness_path = k == res.best_index ? res.best_path : std::vector<Id>{};
      }
    }
  }
  out.value = have ? best : 0;
  if (!have) out.note = "no qualifying pair; sup of the empty set taken as 0";
  if (have && out.witness_path.empty()) {
    out.witness_path = complement_distance(a, p.level(), out.witness_pair->first, out.witness_pair->second).path;
  }
  if (out.pruned) out.note = "pair budget reached; value is a lower bound";
  return out;
}

/// sigma^n_rho(r): inf of d_{ceil(rho r)}(x, y) over x, y in ∂N_r(H) with
/// d_S(x, y) >= n r and x, y joined inside C_r(H). x ranges over
/// S(e, r) ∩ ∂N_r(H), y over ∂N_r(H) within the atlas core. Restricting both
/// the pairs and the paths to the atlas can only raise the infimum, so the
/// result is an upper bound; no qualifying pair gives infinity.
inline DivergenceSample lower_divergence_sample(const AnnotatedBall& a, const DivergenceParams& p,
                                                const DivergenceOptions& opt = {}) {
  using namespace divergence_detail;
  p.validate();
  const int r = p.r;
  require_core(a, r, "lower_divergence_sample");
  const auto& ball = a.base();
  const auto sources = coset_representatives(a, r);
  const auto level_r = complement_components(a, r);
  const auto s = static_cast<std::uint32_t>(p.level());
  const auto radius_r = static_cast<std::uint32_t>(r);
  const auto nr = static_cast<std::uint32_t>(p.n * r);
  // Ambient distances from x (|x| = r) are exact up to R - r.
  const auto exact_reach = static_cast<std::uint32_t>(ball.radius - r);
  const Id core_end = ball.layer_start[static_cast<std::size_t>(a.valid_core) + 1];

  struct Best {
    std::optional<std::uint64_t> value;
    Id y = kNoElement;
    std::vector<Id> path;
    std::uint64_t pairs = 0;
    std::uint64_t ambiguous = 0;
    bool certified = true;
  };
  std::vector<Best> results(sources.size());
  unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(sources.size())));
  std::vector<BallSearch> ambient(workers, BallSearch(ball));
  std::vector<BallSearch> complement(workers, BallSearch(ball));
  parallel_chunks(sources.size(), workers, [&](std::size_t w, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Id x = sources[i];
      const Id comp = level_r.component_id[x];
      auto& res = results[i];
      ambient[w].run({x}, [](Id) { return true; }, exact_reach, [](Id, std::uint32_t) { return true; });
      // Qualifying partners: same C_r component, inside the core, far enough.
      std::vector<Id> candidates;
      for (Id y = 0; y < core_end; ++y) {
        if (a.dist_to_h[y] != radius_r || level_r.component_id[y] != comp) continue;
        auto d = ambient[w].distance(y);
        if (d != kInfinite) {
          if (d >= nr) candidates.push_back(y);
        } else if (exact_reach + 1 >= nr) {
          candidates.push_back(y);
        } else {
          ++res.ambiguous;
        }
      }
      res.pairs = candidates.size();
      if (candidates.empty()) continue;
      // candidates are sorted by id; first hit in BFS order gives the min, ties
      // broken by smallest id among the same depth.
      std::optional<std::uint32_t> hit_depth;
      auto& search = complement[w];
      search.run({x}, [&](Id v) { return a.dist_to_h[v] >= s; }, kInfinite, [&](Id v, std::uint32_t depth) {
        if (hit_depth && depth > *hit_depth) return false;
        if (std::binary_search(candidates.begin(), candidates.end(), v)) {
          if (!hit_depth || v < res.y) {
            hit_depth = depth;
            res.y = v;
          }
        }
        return true;
      });
      if (hit_depth) {
        res.value = *hit_depth;
        res.path = search.path_to(res.y);
        res.certified = certified(ball, *hit_depth, x, res.y);
      }
    }
  });

  DivergenceSample out;
  out.params = p;
  out.kind = DivergenceKind::lower;
  std::uint64_t ambiguous = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    ambiguous += res.ambiguous;
    if (out.pair_count + res.pairs > opt.pair_budget) {
      out.pruned = true;
      break;
    }
    out.pair_count += res.pairs;
    if (res.value && (!out.value || *res.value < *out.value)) {
      out.value = res.value;
      out.witness_pair = {sources[i], res.y};
      out.witness_path = res.path;
      out.flag = res.certified ? Certification::interior_certified : Certification::frontier_limited;
    }
  }
  out.note = "upper bound on sigma; partners capped at word length " + std::to_string(a.valid_core);
  if (ambiguous) out.note += "; " + std::to_string(ambiguous) + " partners skipped (ambient distance undecidable in atlas)";
  if (out.pruned) out.note += "; pair budget reached";
  if (!out.value) out.flag = Certification::frontier_limited;
  return out;
}

/// div_alpha(r) for H = <h>, h a generator: the shortest path avoiding the
/// closed ball B(e, r) between axis points h^-m and h^m' (m, m' >= 1) on the
/// two sides of e. Paths are confined to the atlas, so the value is an upper
/// bound; no connecting path inside the atlas gives infinity.
template <GroupOracle G>
DivergenceSample axis_divergence(const G& group, const AnnotatedBall& a, Letter h, int r) {
  if (r < 1) throw InputError("axis_divergence: r must be positive");
  if (h >= group.alphabet().size()) throw InputError("axis_divergence: h must be a generator");
  divergence_detail::require_core(a, 3 * r, "axis_divergence");
  const auto& ball = a.base();
  auto axis_side = [&](Letter step) {
    std::vector<Id> out;
    Element cur = group.identity();
    while (true) {
      cur = group.multiply(cur, step);
      auto id = ball.find(cur);
      if (!id || ball.word_length[*id] > a.valid_core) break;
      if (ball.word_length[*id] > r) out.push_back(*id);
      if (*id == 0) break;  // h has finite order
    }
    return out;
  };
  auto negative = axis_side(group.alphabet().inverse(h));
  auto positive = axis_side(h);
  if (negative.empty() || positive.empty()) {
    throw RadiusError("axis_divergence: the axis leaves the core before clearing B(e,r)", 0);
  }
  std::sort(positive.begin(), positive.end());
  DivergenceSample out;
  out.params.r = r;
  out.kind = DivergenceKind::axis;
  out.pair_count = negative.size() * positive.size();
  BallSearch search(ball);
  std::optional<std::uint32_t> hit_depth;
  Id hit = kNoElement;
  search.run(negative, [&](Id v) { return ball.word_length[v] > r; }, kInfinite, [&](Id v, std::uint32_t depth) {
    if (hit_depth && depth > *hit_depth) return false;
    if (std::binary_search(positive.begin(), positive.end(), v) && (!hit_depth || v < hit)) {
      hit_depth = depth;
      hit = v;
    }
    return true;
  });
  if (!hit_depth) {
    out.flag = Certification::frontier_limited;
    out.note = "no path around B(e,r) inside the atlas";
    return out;
  }
  out.value = *hit_depth;
  out.witness_path = search.path_to(hit);
  out.witness_pair = {out.witness_path.front(), hit};
  out.flag = *hit_depth + static_cast<std::uint64_t>(r) < static_cast<std::uint64_t>(ball.radius)
                 ? Certification::interior_certified
                 : Certification::frontier_limited;
  return out;
}

/// Samples over a list of radii from one atlas; an error on one row is
/// recorded on that row.
struct ProfileRow {
  int r = 0;
  std::optional<DivergenceSample> sample;
  std::string error;
};

inline std::vector<ProfileRow> divergence_profile(const AnnotatedBall& a, DivergenceKind kind, DivergenceParams base,
                                                  const std::vector<int>& radii, const DivergenceOptions& opt = {}) {
  if (kind == DivergenceKind::axis) throw InputError("divergence_profile: use axis_profile for the axis kind");
  std::vector<ProfileRow> rows;
  for (int r : radii) {
    ProfileRow row;
    row.r = r;
    base.r = r;
    try {
      row.sample = kind == DivergenceKind::upper ? upper_divergence_sample(a, base, opt)
                                                 : lower_divergence_sample(a, base, opt);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <GroupOracle G>
std::vector<ProfileRow> axis_profile(const G& group, const AnnotatedBall& a, Letter h, const std::vector<int>& radii) {
  std::vector<ProfileRow> rows;
  for (int r : radii) {
    ProfileRow row;
    row.r = r;
    try {
      row.sample = axis_divergence(group, a, h, r);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Re-validates a sample's witness path: consecutive adjacency, every vertex
/// at dist_to_H >= level, endpoints equal to the witness pair.
inline bool witness_path_valid(const AnnotatedBall& a, const DivergenceSample& s) {
  if (s.infinite() || !s.witness_pair) return true;
  const auto& path = s.witness_path;
  if (path.empty() || path.front() != s.witness_pair->first || path.back() != s.witness_pair->second) return false;
  if (path.size() != *s.value + 1) return false;
  if (!is_ball_path(a.base(), path)) return false;
  if (s.kind == DivergenceKind::axis) {
    for (Id v : path) {
      if (a.base().word_length[v] <= s.params.r) return false;
    }
    return true;
  }
  const auto level = static_cast<std::uint32_t>(s.params.level());
  for (Id v : path) {
    if (a.dist_to_h[v] < level) return false;
  }
  return true;
}

}  // namespace reldiv
