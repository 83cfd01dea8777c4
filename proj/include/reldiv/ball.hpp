#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <deque>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/crc.hpp>

#include "reldiv/group.hpp"
#include "reldiv/parallel.hpp"
#include "reldiv/subgroup.hpp"
#include "reldiv/union_find.hpp"

namespace reldiv {

using Id = std::uint32_t;
inline constexpr Id kNoElement = std::numeric_limits<Id>::max();
inline constexpr std::uint32_t kInfinite = std::numeric_limits<std::uint32_t>::max();

/// Interned element encodings addressed by dense ids. Bytes live in a single
/// arena; lookup is open addressing over ids.
class ElementTable {
 public:
  std::size_t size() const noexcept { return offsets_.size() - 1; }

  std::string_view get(Id id) const {
    return std::string_view(arena_).substr(offsets_[id], offsets_[id + 1] - offsets_[id]);
  }

  std::optional<Id> find(std::string_view x) const {
    if (slots_.empty()) return std::nullopt;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash(x) & mask;; i = (i + 1) & mask) {
      Id id = slots_[i];
      if (id == kNoElement) return std::nullopt;
      if (get(id) == x) return id;
    }
  }

  /// Returns the id of x, appending it when absent.
  std::pair<Id, bool> insert(std::string_view x) {
    if ((size() + 1) * 2 > slots_.size()) grow();
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash(x) & mask;; i = (i + 1) & mask) {
      Id id = slots_[i];
      if (id == kNoElement) {
        if (size() >= kNoElement - 1) throw BudgetError("element table: id space exhausted");
        Id fresh = static_cast<Id>(size());
        arena_.append(x);
        offsets_.push_back(arena_.size());
        slots_[i] = fresh;
        return {fresh, true};
      }
      if (get(id) == x) return {id, false};
    }
  }

  void reserve(std::size_t n) {
    offsets_.reserve(n + 1);
    std::size_t want = 16;
    while (want < 2 * n) want <<= 1;
    if (want > slots_.size()) rehash(want);
  }

  std::size_t memory_bytes() const noexcept {
    return arena_.capacity() + offsets_.capacity() * sizeof(std::uint64_t) + slots_.capacity() * sizeof(Id);
  }

 private:
  static std::size_t hash(std::string_view x) { return std::hash<std::string_view>{}(x); }

  void grow() { rehash(slots_.empty() ? 16 : slots_.size() * 2); }

  void rehash(std::size_t capacity) {
    slots_.assign(capacity, kNoElement);
    const std::size_t mask = capacity - 1;
    for (Id id = 0; id < size(); ++id) {
      std::size_t i = hash(get(id)) & mask;
      while (slots_[i] != kNoElement) i = (i + 1) & mask;
      slots_[i] = id;
    }
  }

  std::string arena_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Id> slots_;
};

/// The ball B(e, R) of a Cayley graph: every element of word length <= R, with
/// ids in BFS order (shortlex order of the first-discovered geodesic word) and
/// a cached neighbour table.
struct BallIndex {
  int radius = 0;
  std::size_t generator_count = 0;
  std::uint64_t group_digest = 0;
  ElementTable elements;
  std::vector<std::uint16_t> word_length;
  /// layer_start[L] is the first id of word length L; layer_start[R+1] == size().
  std::vector<Id> layer_start;
  /// neighbors[id * generator_count + s] is the id of id*s, or kNoElement when
  /// that product has word length R + 1.
  std::vector<Id> neighbors;

  std::size_t size() const noexcept { return elements.size(); }
  std::string_view element(Id id) const { return elements.get(id); }
  std::optional<Id> find(std::string_view x) const { return elements.find(x); }
  Id neighbor(Id id, Letter s) const { return neighbors[static_cast<std::size_t>(id) * generator_count + s]; }

  /// Number of elements of word length <= r.
  std::size_t count_within(int r) const {
    if (r < 0) return 0;
    if (r > radius) throw RadiusError("ball radius " + std::to_string(radius) + " is smaller than " + std::to_string(r), r);
    return layer_start[static_cast<std::size_t>(r) + 1];
  }
};

struct EnumerateOptions {
  std::size_t element_budget = 10'000'000;
  unsigned threads = 1;
};

namespace ball_detail {

/// Fills neighbors for ids [lo, hi); products are computed in parallel, the
/// table is updated sequentially in (id, generator) order. New elements are
/// appended only when `extend` is set.
template <GroupOracle G>
void expand_layer(const G& group, BallIndex& ball, Id lo, Id hi, bool extend, std::uint16_t next_length,
                  const EnumerateOptions& opt) {
  const std::size_t ng = ball.generator_count;
  std::vector<Element> products(static_cast<std::size_t>(hi - lo) * ng);
  parallel_for(hi - lo, opt.threads, [&](std::size_t i) {
    Element x(ball.element(static_cast<Id>(lo + i)));
    for (std::size_t s = 0; s < ng; ++s) products[i * ng + s] = group.multiply(x, static_cast<Letter>(s));
  });
  ball.neighbors.resize(static_cast<std::size_t>(hi) * ng, kNoElement);
  for (std::size_t i = 0; i < products.size(); ++i) {
    const auto& y = products[i];
    Id target;
    if (extend) {
      auto [id, fresh] = ball.elements.insert(y);
      if (fresh) {
        if (ball.elements.size() > opt.element_budget) {
          throw BudgetError("ball enumeration exceeded the element budget of " + std::to_string(opt.element_budget));
        }
        ball.word_length.push_back(next_length);
      }
      target = id;
    } else {
      target = ball.find(y).value_or(kNoElement);
    }
    ball.neighbors[static_cast<std::size_t>(lo) * ng + i] = target;
  }
}

}  // namespace ball_detail

/// Enumerates B(e, R) layer by layer. The result does not depend on the
/// number of threads. Exceeding the element budget throws; no truncated ball
/// is ever returned.
template <GroupOracle G>
BallIndex enumerate_ball(const G& group, int radius, const EnumerateOptions& opt = {}) {
  if (radius < 0) throw InputError("ball radius must be non-negative");
  if (radius > std::numeric_limits<std::uint16_t>::max() - 1) throw InputError("ball radius too large");
  BallIndex ball;
  ball.radius = radius;
  ball.generator_count = group.alphabet().size();
  ball.group_digest = fnv1a(group.signature());
  ball.elements.insert(group.identity());
  ball.word_length.push_back(0);
  ball.layer_start.push_back(0);
  for (int L = 0; L <= radius; ++L) {
    Id lo = ball.layer_start.back();
    Id hi = static_cast<Id>(ball.size());
    ball_detail::expand_layer(group, ball, lo, hi, L < radius, static_cast<std::uint16_t>(L + 1), opt);
    ball.layer_start.push_back(hi);
  }
  return ball;
}

/// Where dist_to_H came from.
enum class DistanceSource : std::uint8_t { bfs = 0, formula = 1 };

/// How annotate_subgroup_distance picks its source.
enum class DistanceMode { automatic, force_bfs };

/// A ball annotated with the distance of every element to a subgroup H.
///
/// With BFS-derived distances only elements of word length <= valid_core are
/// guaranteed exact: a nearest point of H and a geodesic to it then lie inside
/// the ball. Closed-form distances are exact everywhere (valid_core = R).
struct AnnotatedBall {
  std::shared_ptr<const BallIndex> ball;
  std::vector<std::uint32_t> dist_to_h;
  std::vector<std::uint8_t> member;
  int valid_core = 0;
  DistanceSource source = DistanceSource::bfs;

  const BallIndex& base() const { return *ball; }
  int radius() const { return ball->radius; }
  std::size_t size() const { return ball->size(); }
};

template <GroupOracle G>
AnnotatedBall annotate_subgroup_distance(const G& group, std::shared_ptr<const BallIndex> ball,
                                         const SubgroupSpec& spec, DistanceMode mode = DistanceMode::automatic,
                                         unsigned threads = 1) {
  if (!spec.member) throw ConfigError("subgroup has no membership predicate");
  for (const auto& w : spec.generating_words) {
    if (!spec.member(word_to_element(group, w))) {
      throw ConfigError("subgroup generating word '" + group.alphabet().format(w) + "' fails the membership check");
    }
  }
  const std::size_t n = ball->size();
  AnnotatedBall out;
  out.ball = ball;
  out.member.assign(n, 0);
  out.dist_to_h.assign(n, kInfinite);
  const bool formula = spec.has_exact_distance() && mode == DistanceMode::automatic;
  parallel_for(n, threads, [&](std::size_t i) {
    Element x(ball->element(static_cast<Id>(i)));
    out.member[i] = spec.member(x) ? 1 : 0;
    if (formula) out.dist_to_h[i] = static_cast<std::uint32_t>(spec.exact_distance(x));
  });
  if (formula) {
    out.source = DistanceSource::formula;
    out.valid_core = ball->radius;
    return out;
  }
  std::vector<Id> queue;
  queue.reserve(n);
  for (Id i = 0; i < n; ++i) {
    if (out.member[i]) {
      out.dist_to_h[i] = 0;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Id x = queue[head];
    for (std::size_t s = 0; s < ball->generator_count; ++s) {
      Id y = ball->neighbor(x, static_cast<Letter>(s));
      if (y != kNoElement && out.dist_to_h[y] == kInfinite) {
        out.dist_to_h[y] = out.dist_to_h[x] + 1;
        queue.push_back(y);
      }
    }
  }
  out.source = DistanceSource::bfs;
  out.valid_core = ball->radius / 2;
  return out;
}

inline void require_in_core(const AnnotatedBall& a, int r, const char* what) {
  if (r < 1 || r > a.valid_core) {
    throw RadiusError(std::string(what) + ": r=" + std::to_string(r) + " is outside the certified core [1, " +
                          std::to_string(a.valid_core) + "]",
                      a.source == DistanceSource::bfs ? 2 * r : r);
  }
}

/// Elements with dist_to_H == r and word length <= cutoff (default: the
/// valid core), in id order.
inline std::vector<Id> boundary_set(const AnnotatedBall& a, int r, std::optional<int> cutoff = std::nullopt) {
  require_in_core(a, r, "boundary_set");
  int limit = cutoff.value_or(a.valid_core);
  if (limit > a.valid_core) throw RadiusError("boundary_set: cutoff beyond the certified core", limit);
  std::vector<Id> out;
  Id end = a.base().layer_start[static_cast<std::size_t>(limit) + 1];
  for (Id i = 0; i < end; ++i) {
    if (a.dist_to_h[i] == static_cast<std::uint32_t>(r)) out.push_back(i);
  }
  return out;
}

/// Connected components of {x : dist_to_H(x) >= r} inside the ball.
struct ComplementLabeling {
  int level = 0;
  int depth_threshold = 0;
  /// Per element; kNoElement for elements closer than r to H.
  std::vector<Id> component_id;
  std::vector<std::size_t> component_size;
  /// Component contains an element of word length R.
  std::vector<std::uint8_t> touches_frontier;
  /// Component contains an element of word length R at distance >= depth_threshold from H.
  std::vector<std::uint8_t> deep;

  std::size_t count() const noexcept { return component_size.size(); }
  std::size_t frontier_count() const { return static_cast<std::size_t>(std::count(touches_frontier.begin(), touches_frontier.end(), 1)); }
  std::size_t deep_count() const { return static_cast<std::size_t>(std::count(deep.begin(), deep.end(), 1)); }
};

/// Components are numbered by their smallest element id. The default depth
/// threshold is max(r, R/2): a frontier point that far from H is the
/// computable stand-in for "not inside any bounded neighbourhood of H".
inline ComplementLabeling complement_components(const AnnotatedBall& a, int r,
                                                std::optional<int> depth_threshold = std::nullopt) {
  require_in_core(a, r, "complement_components");
  const auto& ball = a.base();
  const std::size_t n = ball.size();
  const auto level = static_cast<std::uint32_t>(r);
  UnionFind uf(n);
  for (Id x = 0; x < n; ++x) {
    if (a.dist_to_h[x] < level) continue;
    for (std::size_t s = 0; s < ball.generator_count; ++s) {
      Id y = ball.neighbor(x, static_cast<Letter>(s));
      if (y != kNoElement && y > x && a.dist_to_h[y] >= level) uf.unite(x, y);
    }
  }
  ComplementLabeling out;
  out.level = r;
  out.depth_threshold = depth_threshold.value_or(std::max(r, ball.radius / 2));
  out.component_id.assign(n, kNoElement);
  std::vector<Id> root_label(n, kNoElement);
  const Id frontier_start = ball.layer_start[static_cast<std::size_t>(ball.radius)];
  for (Id x = 0; x < n; ++x) {
    if (a.dist_to_h[x] < level) continue;
    Id root = uf.find(x);
    if (root_label[root] == kNoElement) {
      root_label[root] = static_cast<Id>(out.component_size.size());
      out.component_size.push_back(0);
      out.touches_frontier.push_back(0);
      out.deep.push_back(0);
    }
    Id c = root_label[root];
    out.component_id[x] = c;
    ++out.component_size[c];
    if (x >= frontier_start) {
      out.touches_frontier[c] = 1;
      if (a.dist_to_h[x] != kInfinite && a.dist_to_h[x] >= static_cast<std::uint32_t>(out.depth_threshold)) out.deep[c] = 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Atlas cache files.
//
//   magic            8 bytes  "RDATLAS\0"
//   version          u32      kAtlasFormatVersion
//   group digest     u64      FNV-1a of the group signature
//   radius           u32
//   valid core       u32
//   distance source  u8       0 = BFS, 1 = closed formula
//   generator count  u32
//   element count    u64
//   elements         count x { word length u16, byte length u32, bytes }
//   dist_to_H        count x u32 (0xffffffff = unreachable inside the ball)
//   member           count x u8
//   crc32            u32      over every preceding byte
//
// All integers little-endian.

inline constexpr std::uint32_t kAtlasFormatVersion = 1;
inline constexpr char kAtlasMagic[8] = {'R', 'D', 'A', 'T', 'L', 'A', 'S', '\0'};

namespace ball_detail {

template <class T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw FormatError("atlas file is truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view bytes(std::size_t n) {
    if (pos_ + n > data_.size()) throw FormatError("atlas file is truncated");
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

}  // namespace ball_detail

inline std::string serialize_atlas(const AnnotatedBall& a) {
  using ball_detail::put_le;
  const auto& ball = a.base();
  std::string out(kAtlasMagic, sizeof(kAtlasMagic));
  put_le<std::uint32_t>(out, kAtlasFormatVersion);
  put_le<std::uint64_t>(out, ball.group_digest);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ball.radius));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(a.valid_core));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(a.source));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ball.generator_count));
  put_le<std::uint64_t>(out, ball.size());
  for (Id i = 0; i < ball.size(); ++i) {
    auto x = ball.element(i);
    put_le<std::uint16_t>(out, ball.word_length[i]);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(x.size()));
    out.append(x);
  }
  for (auto d : a.dist_to_h) put_le<std::uint32_t>(out, d);
  for (auto m : a.member) put_le<std::uint8_t>(out, m);
  put_le<std::uint32_t>(out, ball_detail::crc32(out));
  return out;
}

/// Rebuilds an atlas from its serialized bytes. The neighbour table is
/// recomputed with the group oracle, which must match the recorded digest.
template <GroupOracle G>
AnnotatedBall deserialize_atlas(const G& group, std::string_view data, unsigned threads = 1) {
  if (data.size() < sizeof(kAtlasMagic) + 4 || std::memcmp(data.data(), kAtlasMagic, sizeof(kAtlasMagic)) != 0) {
    throw FormatError("not an atlas file (bad magic)");
  }
  ball_detail::ByteReader in(data);
  in.bytes(sizeof(kAtlasMagic));
  auto version = in.get<std::uint32_t>();
  if (version != kAtlasFormatVersion) {
    throw FormatError("atlas format version " + std::to_string(version) + " is not supported (reader version " +
                      std::to_string(kAtlasFormatVersion) + ")");
  }
  if (data.size() < 4) throw FormatError("atlas file is truncated");
  ball_detail::ByteReader tail(data.substr(data.size() - 4));
  if (tail.get<std::uint32_t>() != ball_detail::crc32(data.substr(0, data.size() - 4))) {
    throw FormatError("atlas checksum mismatch");
  }
  auto ball = std::make_shared<BallIndex>();
  ball->group_digest = in.get<std::uint64_t>();
  if (ball->group_digest != fnv1a(group.signature())) {
    throw FormatError("atlas was built for a different group configuration");
  }
  ball->radius = static_cast<int>(in.get<std::uint32_t>());
  AnnotatedBall a;
  a.valid_core = static_cast<int>(in.get<std::uint32_t>());
  a.source = static_cast<DistanceSource>(in.get<std::uint8_t>());
  ball->generator_count = in.get<std::uint32_t>();
  if (ball->generator_count != group.alphabet().size()) throw FormatError("atlas generator count mismatch");
  auto count = in.get<std::uint64_t>();
  ball->elements.reserve(count);
  ball->word_length.reserve(count);
  ball->layer_start.push_back(0);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto len = in.get<std::uint16_t>();
    auto bytes = in.bytes(in.get<std::uint32_t>());
    if (!ball->elements.insert(bytes).second) throw FormatError("atlas contains a duplicate element");
    if (i > 0 && len < ball->word_length.back()) throw FormatError("atlas elements are not in BFS order");
    while (ball->layer_start.size() <= len) ball->layer_start.push_back(static_cast<Id>(i));
    ball->word_length.push_back(len);
  }
  while (ball->layer_start.size() <= static_cast<std::size_t>(ball->radius) + 1) ball->layer_start.push_back(static_cast<Id>(count));
  a.dist_to_h.resize(count);
  for (auto& d : a.dist_to_h) d = in.get<std::uint32_t>();
  a.member.resize(count);
  for (auto& m : a.member) m = in.get<std::uint8_t>();
  if (in.position() != data.size() - 4) throw FormatError("atlas file has trailing bytes");
  EnumerateOptions opt;
  opt.threads = threads;
  ball_detail::expand_layer(group, *ball, 0, static_cast<Id>(count), false, 0, opt);
  a.ball = std::move(ball);
  return a;
}

inline void save_ball(const AnnotatedBall& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  auto bytes = serialize_atlas(a);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path + "'");
}

template <GroupOracle G>
AnnotatedBall load_ball(const G& group, const std::string& path, unsigned threads = 1) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open atlas '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_atlas(group, buf.str(), threads);
}

}  // namespace reldiv
