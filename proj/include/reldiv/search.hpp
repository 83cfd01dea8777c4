#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "reldiv/ball.hpp"

namespace reldiv {

/// Reusable breadth-first search over a ball's neighbour table. Only the
/// entries touched by the last search are reset, so repeated searches from
/// many sources cost time proportional to what they explore.
class BallSearch {
 public:
  explicit BallSearch(const BallIndex& ball)
      : ball_(&ball), dist_(ball.size(), kInfinite), parent_(ball.size(), kNoElement) {}

  /// BFS from `sources` through elements accepted by `allowed`, up to
  /// `max_depth` steps. `visit(id, depth)` is called once per reached element in
  /// BFS order (sources first, in the given order) and may return false to stop.
  template <class Allowed, class Visit>
  void run(const std::vector<Id>& sources, Allowed&& allowed, std::uint32_t max_depth, Visit&& visit) {
    reset();
    for (Id s : sources) {
      if (dist_[s] != kInfinite || !allowed(s)) continue;
      dist_[s] = 0;
      touched_.push_back(s);
    }
    for (std::size_t head = 0; head < touched_.size(); ++head) {
      Id x = touched_[head];
      if (!visit(x, dist_[x])) return;
      if (dist_[x] >= max_depth) continue;
      for (std::size_t s = 0; s < ball_->generator_count; ++s) {
        Id y = ball_->neighbor(x, static_cast<Letter>(s));
        if (y == kNoElement || dist_[y] != kInfinite || !allowed(y)) continue;
        dist_[y] = dist_[x] + 1;
        parent_[y] = x;
        touched_.push_back(y);
      }
    }
  }

  std::uint32_t distance(Id x) const { return dist_[x]; }

  /// Source-to-x path of the last search (x must have been reached).
  std::vector<Id> path_to(Id x) const {
    std::vector<Id> path;
    for (Id cur = x; cur != kNoElement; cur = parent_[cur]) {
      path.push_back(cur);
      if (dist_[cur] == 0) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  void reset() {
    for (Id x : touched_) {
      dist_[x] = kInfinite;
      parent_[x] = kNoElement;
    }
    touched_.clear();
  }

  const BallIndex* ball_;
  std::vector<std::uint32_t> dist_;
  std::vector<Id> parent_;
  std::vector<Id> touched_;
};

/// True iff consecutive ids are joined by an edge of the ball.
inline bool is_ball_path(const BallIndex& ball, const std::vector<Id>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    bool adjacent = false;
    for (std::size_t s = 0; s < ball.generator_count && !adjacent; ++s) {
      adjacent = ball.neighbor(path[i], static_cast<Letter>(s)) == path[i + 1];
    }
    if (!adjacent) return false;
  }
  return true;
}

}  // namespace reldiv
