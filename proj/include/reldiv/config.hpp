#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reldiv/errors.hpp"
#include "reldiv/group.hpp"
#include "reldiv/groups/free_abelian.hpp"
#include "reldiv/groups/free_group.hpp"
#include "reldiv/groups/heisenberg.hpp"
#include "reldiv/groups/racg.hpp"
#include "reldiv/subgroup.hpp"

namespace reldiv {

using Json = nlohmann::json;

// Group configs (JSON):
//   {"family": "zd", "d": 2}
//   {"family": "heisenberg", "generators": "abc" | "ab"}
//   {"family": "free", "rank": 2}
//   {"family": "racg", "vertices": 5, "edges": [[1,2],[2,3],...]}   or  {"family": "racg", "cycle": 5}
//
// Subgroup configs:
//   {"generators": ["a"], "formula": "zd-coordinates" | "heisenberg-center",
//    "membership": "auto" | "enumerate", "enumerate_radius": 16,
//    "extend_generators": false, "description": "..."}

struct GroupConfig {
  Json raw;
  std::string family;
  AnyGroup group;

  /// FNV-1a of the canonical (sorted-key) JSON text.
  std::uint64_t digest() const { return fnv1a(raw.dump()); }
};

struct SubgroupConfig {
  Json raw;
  std::vector<std::string> generators;
  std::string formula;
  std::string membership = "auto";
  std::optional<std::uint64_t> enumerate_radius;
  bool extend_generators = false;
  std::string description;

  std::uint64_t digest() const { return fnv1a(raw.dump()); }
};

namespace config_detail {

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <class T>
T get(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw ConfigError(std::string(what) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string(what) + ": bad '" + key + "': " + e.what());
  }
}

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace config_detail

inline GroupConfig parse_group_config(const Json& j) {
  using namespace config_detail;
  GroupConfig cfg;
  cfg.raw = j;
  cfg.family = get<std::string>(j, "family", "group config");
  try {
    if (cfg.family == "zd") {
      check_keys(j, {"family", "d", "description"}, "group config");
      cfg.group = FreeAbelianGroup(get<int>(j, "d", "group config"));
    } else if (cfg.family == "heisenberg") {
      check_keys(j, {"family", "generators", "description"}, "group config");
      std::string gens = j.value("generators", std::string("abc"));
      if (gens != "abc" && gens != "ab") throw ConfigError("heisenberg: generators must be \"abc\" or \"ab\"");
      cfg.group = HeisenbergGroup(gens == "abc");
    } else if (cfg.family == "free") {
      check_keys(j, {"family", "rank", "description"}, "group config");
      cfg.group = FreeGroup(get<int>(j, "rank", "group config"));
    } else if (cfg.family == "racg") {
      check_keys(j, {"family", "vertices", "edges", "cycle", "description"}, "group config");
      if (j.contains("cycle")) {
        cfg.group = RightAngledCoxeterGroup(CommutationGraph::cycle(get<int>(j, "cycle", "group config")));
      } else {
        auto edges = get<std::vector<std::pair<int, int>>>(j, "edges", "group config");
        cfg.group = RightAngledCoxeterGroup(CommutationGraph(get<int>(j, "vertices", "group config"), edges));
      }
    } else {
      throw ConfigError("unknown group family '" + cfg.family + "'");
    }
  } catch (const InputError& e) {
    throw ConfigError(std::string("group config: ") + e.what());
  }
  return cfg;
}

inline GroupConfig load_group_config(const std::string& path) { return parse_group_config(config_detail::read_json(path)); }

inline SubgroupConfig parse_subgroup_config(const Json& j) {
  using namespace config_detail;
  check_keys(j, {"generators", "formula", "axes", "membership", "enumerate_radius", "extend_generators", "description"},
             "subgroup config");
  SubgroupConfig cfg;
  cfg.raw = j;
  cfg.generators = j.contains("generators") ? get<std::vector<std::string>>(j, "generators", "subgroup config")
                                            : std::vector<std::string>{};
  cfg.formula = j.value("formula", std::string());
  cfg.membership = j.value("membership", std::string("auto"));
  if (cfg.membership != "auto" && cfg.membership != "enumerate") {
    throw ConfigError("subgroup config: membership must be \"auto\" or \"enumerate\"");
  }
  if (j.contains("enumerate_radius")) cfg.enumerate_radius = get<std::uint64_t>(j, "enumerate_radius", "subgroup config");
  cfg.extend_generators = j.value("extend_generators", false);
  cfg.description = j.value("description", std::string());
  if (!cfg.formula.empty() && cfg.formula != "zd-coordinates" && cfg.formula != "heisenberg-center") {
    throw ConfigError("subgroup config: unknown formula '" + cfg.formula + "'");
  }
  return cfg;
}

inline SubgroupConfig load_subgroup_config(const std::string& path) {
  return parse_subgroup_config(config_detail::read_json(path));
}

/// The group the balls are built over, and H inside it. With
/// extend_generators each generating word becomes an extra generator, so the
/// word metric (and every raw value) changes; closed-form distances are then
/// dropped in favour of BFS.
struct Problem {
  GroupConfig group_config;
  SubgroupConfig subgroup_config;
  AnyGroup group;
  SubgroupSpec subgroup;

  std::uint64_t digest() const {
    return fnv1a(group_config.raw.dump() + "|" + subgroup_config.raw.dump() + "|" + group.signature());
  }
};

/// `atlas_radius` bounds the ball that membership must be exact on.
inline SubgroupSpec build_subgroup(const AnyGroup& base, const SubgroupConfig& cfg, int atlas_radius) {
  std::vector<Word> words;
  try {
    for (const auto& g : cfg.generators) words.push_back(base.alphabet().parse(g));
  } catch (const InputError& e) {
    throw ConfigError(std::string("subgroup generators: ") + e.what());
  }
  SubgroupSpec spec;
  const bool enumerate = cfg.membership == "enumerate";
  if (cfg.formula == "heisenberg-center") {
    auto* h = base.target<HeisenbergGroup>();
    if (!h) throw ConfigError("formula heisenberg-center needs the heisenberg family");
    spec = heisenberg_center_subgroup(*h);
    if (!words.empty()) spec.generating_words = words;
  } else if (cfg.formula == "zd-coordinates") {
    auto* z = base.target<FreeAbelianGroup>();
    if (!z) throw ConfigError("formula zd-coordinates needs the zd family");
    std::vector<int> axes;
    for (const auto& w : words) {
      if (w.size() != 1 || w[0] % 2 != 0) throw ConfigError("zd-coordinates: generators must be single positive basis letters");
      axes.push_back(w[0] / 2);
    }
    spec = zd_coordinate_subgroup(*z, axes);
  } else if (auto* z = base.target<FreeAbelianGroup>(); z && !enumerate) {
    spec = zd_lattice_subgroup(*z, words);
  } else if (auto* f = base.target<FreeGroup>(); f && !enumerate) {
    spec = free_subgroup(*f, words);
  } else {
    std::uint64_t t = cfg.enumerate_radius.value_or(static_cast<std::uint64_t>(std::max(atlas_radius, 1)));
    spec = enumerated_subgroup(base, words, t);
  }
  if (!cfg.description.empty()) spec.description = cfg.description;
  return spec;
}

inline Problem make_problem(GroupConfig gc, SubgroupConfig sc, int atlas_radius) {
  Problem p;
  p.group_config = std::move(gc);
  p.subgroup_config = std::move(sc);
  const AnyGroup base = p.group_config.group;
  SubgroupSpec spec = build_subgroup(base, p.subgroup_config, atlas_radius);
  if (p.subgroup_config.extend_generators && !spec.generating_words.empty()) {
    ExtendedGroup ext(base, spec.generating_words);
    std::vector<Word> added;
    for (std::size_t i = 0; i < spec.generating_words.size(); ++i) added.push_back(Word{ext.added_letter(i)});
    spec.generating_words = std::move(added);
    spec.exact_distance = nullptr;
    p.group = AnyGroup(std::move(ext));
  } else {
    p.group = base;
  }
  p.subgroup = std::move(spec);
  return p;
}

}  // namespace reldiv
