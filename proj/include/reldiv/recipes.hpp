#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reldiv/asymptotics.hpp"
#include "reldiv/ball.hpp"
#include "reldiv/config.hpp"
#include "reldiv/divergence.hpp"
#include "reldiv/invariants.hpp"
#include "reldiv/report.hpp"
#include "reldiv/symbolic.hpp"

namespace reldiv {

inline constexpr const char* kCacheEnv = "RELDIV_CACHE_DIR";

struct RunOptions {
  unsigned threads = 1;
  std::size_t element_budget = 10'000'000;
  std::uint64_t pair_budget = 50'000'000;
  std::optional<std::string> cache_dir;
  /// Overrides of the recipe defaults.
  std::optional<std::pair<int, int>> radii;
  std::optional<int> n;
  std::optional<std::pair<std::int64_t, std::int64_t>> rho;
};

inline std::optional<std::string> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv(kCacheEnv); env && *env) return std::string(env);
  return std::nullopt;
}

/// Builds annotated balls, going through an on-disk cache when one is set.
/// Cache files are named by the problem digest and radius.
class AtlasStore {
 public:
  explicit AtlasStore(const RunOptions& opt) : opt_(opt), dir_(resolve_cache_dir(opt.cache_dir)) {}

  std::shared_ptr<const AnnotatedBall> get(const Problem& p, int radius) {
    const std::string key = hex64(p.digest()) + "-R" + std::to_string(radius);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::optional<std::string> path;
    if (dir_) {
      std::filesystem::create_directories(*dir_);
      path = (std::filesystem::path(*dir_) / (key + ".atlas")).string();
      if (std::filesystem::exists(*path)) {
        try {
          auto a = std::make_shared<const AnnotatedBall>(load_ball(p.group, *path, opt_.threads));
          memo_[key] = a;
          return a;
        } catch (const FormatError&) {
          // stale or damaged cache entry: rebuild below and overwrite
        }
      }
    }
    EnumerateOptions eo;
    eo.threads = opt_.threads;
    eo.element_budget = opt_.element_budget;
    auto ball = std::make_shared<const BallIndex>(enumerate_ball(p.group, radius, eo));
    auto a = std::make_shared<const AnnotatedBall>(
        annotate_subgroup_distance(p.group, ball, p.subgroup, DistanceMode::automatic, opt_.threads));
    if (path) save_ball(*a, *path);
    memo_[key] = a;
    return a;
  }

 private:
  RunOptions opt_;
  std::optional<std::string> dir_;
  std::map<std::string, std::shared_ptr<const AnnotatedBall>> memo_;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RecipeReport {
  std::string recipe;
  std::string statement;
  std::uint64_t digest = 0;
  std::vector<Check> checks;
  /// file name -> content, written by the caller.
  std::vector<std::pair<std::string, std::string>> files;
  Json data = Json::object();
  bool budget_exceeded = false;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !budget_exceeded;
  }

  void check(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }

  std::string summary() const {
    std::ostringstream out;
    out << "recipe " << recipe << " (reldiv " << kToolVersion << ", config digest " << hex64(digest) << ")\n";
    out << "statement: " << statement << "\n";
    for (const auto& c : checks) {
      out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name;
      if (!c.detail.empty()) out << "  [" << c.detail << "]";
      out << "\n";
    }
    if (budget_exceeded) out << "  budget exceeded: outputs are partial\n";
    out << (ok() ? "all checks passed\n" : "some checks failed\n");
    return out.str();
  }
};

// ---------------------------------------------------------------------------
// JSON views

inline Json to_json(const GrowthClassReport& r) {
  return Json{{"class", to_string(r.cls)},
              {"leaning", to_string(r.leaning)},
              {"degree", r.degree},
              {"rounded_degree", r.rounded_degree},
              {"degree_interval", {r.degree_lo, r.degree_hi}},
              {"exp_rate", r.exp_rate},
              {"poly_rms", r.poly_rms},
              {"exp_rms", r.exp_rms},
              {"finite_samples", r.finite_samples},
              {"infinite_samples", r.infinite_samples},
              {"window", r.window},
              {"window_start", r.window_start},
              {"note", r.note}};
}

inline Json to_json(const DominationResult& d) {
  return Json{{"verdict", to_string(d.verdict)}, {"A", d.A}, {"B", d.B}, {"C", d.C}, {"checked", d.checked}, {"note", d.note}};
}

inline Json to_json(const SampledFunction& f) {
  Json pts = Json::array();
  for (const auto& p : f.points) pts.push_back({p.r, p.value ? Json(*p.value) : Json("inf")});
  return Json{{"provenance", f.provenance}, {"samples", pts}};
}

// ---------------------------------------------------------------------------
// Shipped configurations (identical to the files under configs/)

namespace shipped {

inline Json group_z2() { return {{"family", "zd"}, {"d", 2}}; }
inline Json group_heisenberg_abc() { return {{"family", "heisenberg"}, {"generators", "abc"}}; }
inline Json group_heisenberg_ab() { return {{"family", "heisenberg"}, {"generators", "ab"}}; }
inline Json group_f2() { return {{"family", "free"}, {"rank", 2}}; }
inline Json group_pentagon() {
  return {{"family", "racg"}, {"vertices", 5}, {"edges", Json::array({{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}})}};
}

inline Json subgroup_z2_axis() { return {{"generators", {"a"}}, {"formula", "zd-coordinates"}}; }
inline Json subgroup_z2_sublattice() { return {{"generators", {"a^2", "b^2"}}}; }
inline Json subgroup_heisenberg_center() { return {{"generators", Json::array()}, {"formula", "heisenberg-center"}}; }
inline Json subgroup_f2_a() { return {{"generators", {"a"}}}; }
inline Json subgroup_f2_trivial() { return {{"generators", Json::array()}}; }
inline Json subgroup_pentagon_s1s3() { return {{"generators", {"s1 s3"}}, {"membership", "enumerate"}}; }

inline Problem problem(const Json& group, const Json& subgroup, int atlas_radius) {
  return make_problem(parse_group_config(group), parse_subgroup_config(subgroup), atlas_radius);
}

}  // namespace shipped

namespace recipe_detail {

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int r = lo; r <= hi; ++r) v.push_back(r);
  return v;
}

inline std::string witness_text(const AnyGroup& g, const AnnotatedBall& a, const DivergenceSample& s) {
  if (!s.witness_pair) return "";
  return g.describe(Element(a.base().element(s.witness_pair->first))) + " -> " +
         g.describe(Element(a.base().element(s.witness_pair->second)));
}

inline std::string rho_text(const DivergenceParams& p) {
  return std::to_string(p.rho_num) + "/" + std::to_string(p.rho_den);
}

inline void add_header(CsvTable& t, const RecipeReport& rep, const std::string& what) {
  t.meta("tool", std::string("reldiv ") + kToolVersion);
  t.meta("recipe", rep.recipe);
  t.meta("config-digest", hex64(rep.digest));
  t.meta("statement", rep.statement);
  t.meta("table", what);
}

inline SampledFunction sampled(const std::vector<std::pair<int, std::optional<std::uint64_t>>>& rows, std::string tag) {
  SampledFunction f;
  f.provenance = std::move(tag);
  for (auto [r, v] : rows) f.add(r, v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt);
  return f;
}

inline bool linear_or_leaning_linear(const GrowthClassReport& c) {
  if (c.cls == GrowthClass::linear || c.cls == GrowthClass::bounded) return true;
  return c.cls == GrowthClass::indeterminate && (c.leaning == GrowthClass::linear || c.leaning == GrowthClass::bounded);
}

/// One divergence table over (rho, n, r) with its classification per (rho, n).
struct DivergenceTable {
  std::map<std::pair<std::string, int>, SampledFunction> series;
  std::vector<DivergenceSample> samples;
};

inline DivergenceTable divergence_table(const AnyGroup& g, const AnnotatedBall& a, DivergenceKind kind,
                                        const std::vector<std::pair<std::int64_t, std::int64_t>>& rhos,
                                        const std::vector<int>& ns, const std::vector<int>& radii,
                                        const RunOptions& opt, CsvTable& csv, RecipeReport& rep) {
  DivergenceTable t;
  DivergenceOptions dopt;
  dopt.threads = opt.threads;
  dopt.pair_budget = opt.pair_budget;
  for (auto [num, den] : rhos) {
    for (int n : ns) {
      DivergenceParams p;
      p.rho_num = num;
      p.rho_den = den;
      p.n = n;
      std::vector<std::pair<int, std::optional<std::uint64_t>>> rows;
      for (int r : radii) {
        p.r = r;
        auto s = kind == DivergenceKind::upper ? upper_divergence_sample(a, p, dopt) : lower_divergence_sample(a, p, dopt);
        if (s.pruned) rep.budget_exceeded = true;
        csv.row({to_string(kind), rho_text(p), std::to_string(n), std::to_string(r), format_value(s.value),
                 std::to_string(s.pair_count), to_string(s.flag), s.pruned ? "1" : "0", witness_text(g, a, s)});
        rows.emplace_back(r, s.value);
        t.samples.push_back(std::move(s));
      }
      t.series[{rho_text(p), n}] = sampled(rows, std::string(to_string(kind)) + " rho=" + rho_text(p) + " n=" + std::to_string(n));
    }
  }
  return t;
}

inline CsvTable divergence_csv(const RecipeReport& rep, const std::string& what) {
  CsvTable t({"kind", "rho", "n", "r", "value", "pair_count", "flag", "pruned", "witness"});
  add_header(t, rep, what);
  return t;
}

}  // namespace recipe_detail

// ---------------------------------------------------------------------------
// Recipes

/// Distortion of the centre of the Heisenberg group over S = {a, b}.
inline RecipeReport recipe_heisenberg_distortion(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "heisenberg-distortion";
  rep.statement = "upper and lower distortion of the centre <c> of the integer Heisenberg group are both quadratic; "
                  "dist(r) <= Dist(2r) and dist(r) <= Growth(2r)";
  auto [lo, hi] = opt.radii.value_or(std::pair{2, 10});
  const int ext_hi = std::max(hi, 32);
  const int R = std::max(2 * hi, ext_hi);
  auto problem = shipped::problem(shipped::group_heisenberg_ab(), shipped::subgroup_heisenberg_center(), R);
  rep.digest = problem.digest();
  AtlasStore store(opt);
  auto atlas = store.get(problem, R);
  const auto& ball = atlas->base();

  CsvTable t({"r", "Dist", "dist", "Dist_2r", "Growth_2r", "Dist_witness", "dist_witness"});
  add_header(t, rep, "distortion of <c> over S={a,b}; T-length of c^p is |p|");
  std::vector<std::pair<int, std::optional<std::uint64_t>>> up, low;
  bool bound_dist = true, bound_growth = true, witnesses = true;
  std::string bad;
  for (int r = lo; r <= hi; ++r) {
    auto u = upper_distortion(problem.group, *atlas, problem.subgroup, r);
    auto l = lower_distortion(problem.group, *atlas, problem.subgroup, r);
    auto u2 = upper_distortion(problem.group, *atlas, problem.subgroup, 2 * r);
    auto g2 = growth(ball, 2 * r);
    if (l.value > u2.value) {
      bound_dist = false;
      bad += " dist>Dist2r@" + std::to_string(r);
    }
    if (l.value > g2) {
      bound_growth = false;
      bad += " dist>Growth2r@" + std::to_string(r);
    }
    if (u.witness && !(problem.subgroup.member(*u.witness) && u.witness_ambient_length <= static_cast<std::uint64_t>(r))) witnesses = false;
    t.row({std::to_string(r), std::to_string(u.value), std::to_string(l.value), std::to_string(u2.value), std::to_string(g2),
           u.witness ? problem.group.describe(*u.witness) : "", l.witness ? problem.group.describe(*l.witness) : ""});
    up.emplace_back(r, u.value);
    low.emplace_back(r, l.value);
  }
  rep.files.emplace_back("distortion.csv", t.str());

  CsvTable ext({"r", "Dist", "dist"});
  add_header(ext, rep, "extended range for classification");
  std::vector<std::pair<int, std::optional<std::uint64_t>>> up_ext, low_ext;
  for (int r = lo; r <= ext_hi; ++r) {
    auto u = upper_distortion(problem.group, *atlas, problem.subgroup, r);
    auto l = lower_distortion(problem.group, *atlas, problem.subgroup, r);
    ext.row({std::to_string(r), std::to_string(u.value), std::to_string(l.value)});
    up_ext.emplace_back(r, u.value);
    low_ext.emplace_back(r, l.value);
  }
  rep.files.emplace_back("distortion_extended.csv", ext.str());

  auto c_up = classify(sampled(up, "Dist"));
  auto c_low = classify(sampled(low, "dist"));
  auto c_up_ext = classify(sampled(up_ext, "Dist extended"));
  auto c_low_ext = classify(sampled(low_ext, "dist extended"));
  auto quadratic = [](const GrowthClassReport& c) {
    return c.cls == GrowthClass::polynomial && c.degree >= 1.5 && c.degree <= 2.5;
  };
  rep.data["classification"] = {{"Dist", to_json(c_up)}, {"dist", to_json(c_low)},
                                {"Dist_extended", to_json(c_up_ext)}, {"dist_extended", to_json(c_low_ext)}};
  rep.data["radii"] = {lo, hi};
  rep.data["extended_radii"] = {lo, ext_hi};
  rep.check("dist(r) <= Dist(2r) at every sampled r", bound_dist, bad);
  rep.check("dist(r) <= Growth(2r) at every sampled r", bound_growth, bad);
  rep.check("upper distortion witnesses lie in H with |h|_S <= r", witnesses);
  auto desc = [](const GrowthClassReport& c) {
    return std::string(to_string(c.cls)) + "/" + to_string(c.leaning) + " degree " + format_number(std::round(c.degree * 1000) / 1000);
  };
  const std::string primary = std::to_string(lo) + ".." + std::to_string(hi);
  rep.check("Dist classified polynomial, degree in [1.5, 2.5] on r=" + primary, quadratic(c_up), desc(c_up));
  rep.check("dist classified polynomial, degree in [1.5, 2.5] on r=" + primary, quadratic(c_low), desc(c_low));
  rep.check("Dist classified polynomial, degree in [1.5, 2.5] on r=" + std::to_string(lo) + ".." + std::to_string(ext_hi),
            quadratic(c_up_ext), desc(c_up_ext));
  rep.check("dist classified polynomial, degree in [1.5, 2.5] on r=" + std::to_string(lo) + ".." + std::to_string(ext_hi),
            quadratic(c_low_ext), desc(c_low_ext));
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

/// Upper relative divergence of <c> in the Heisenberg group over {a, b, c}.
inline RecipeReport recipe_heisenberg_divergence(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "heisenberg-divergence";
  rep.statement = "upper relative divergence of the Heisenberg group with respect to its centre is linear; "
                  "delta^n_rho(r) <= 50 n r";
  auto [lo, hi] = opt.radii.value_or(std::pair{2, 4});
  std::vector<int> ns = opt.n ? std::vector<int>{*opt.n} : std::vector<int>{2, 3};
  auto rho = opt.rho.value_or(std::pair<std::int64_t, std::int64_t>{1, 2});
  const int R = hi * (1 + *std::max_element(ns.begin(), ns.end()));
  auto problem = shipped::problem(shipped::group_heisenberg_abc(), shipped::subgroup_heisenberg_center(), R);
  rep.digest = problem.digest();
  AtlasStore store(opt);
  auto atlas = store.get(problem, R);
  auto csv = divergence_csv(rep, "upper relative divergence delta^n_rho(r)");
  auto table = divergence_table(problem.group, *atlas, DivergenceKind::upper, {rho}, ns, range(lo, hi), opt, csv, rep);
  rep.files.emplace_back("divergence.csv", csv.str());
  bool bound = true, paths = true;
  std::string bad;
  for (const auto& s : table.samples) {
    if (!s.value || *s.value > static_cast<std::uint64_t>(50 * s.params.n * s.params.r)) {
      bound = false;
      bad += " n=" + std::to_string(s.params.n) + ",r=" + std::to_string(s.params.r);
    }
    paths = paths && witness_path_valid(*atlas, s);
  }
  rep.check("delta^n_rho(r) <= 50 n r at every sample", bound, bad);
  rep.check("witness paths replay inside the complement", paths);
  Json cls = Json::object();
  for (const auto& [key, f] : table.series) {
    auto c = classify(f);
    cls["rho=" + key.first + ",n=" + std::to_string(key.second)] = to_json(c);
    rep.check("profile n=" + std::to_string(key.second) + " linear or indeterminate leaning linear",
              linear_or_leaning_linear(c), std::string(to_string(c.cls)) + "/" + to_string(c.leaning));
  }
  rep.data["classification"] = cls;
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

/// Z^2 with the x-axis: everything is known in closed form.
inline RecipeReport recipe_z2_axis(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "z2-axis";
  rep.statement = "for Z with the x-axis in Z^2 both relative divergences are linear and there are two filtered ends";
  auto [lo, hi] = opt.radii.value_or(std::pair{2, 5});
  std::vector<int> ns = opt.n ? std::vector<int>{*opt.n} : std::vector<int>{2, 3};
  std::vector<std::pair<std::int64_t, std::int64_t>> rhos =
      opt.rho ? std::vector{*opt.rho} : std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 2}, {1, 1}};
  const int nmax = *std::max_element(ns.begin(), ns.end());
  const int R = std::max(hi * (1 + nmax), 3 * hi);
  auto problem = shipped::problem(shipped::group_z2(), shipped::subgroup_z2_axis(), R);
  rep.digest = problem.digest();
  AtlasStore store(opt);
  auto atlas = store.get(problem, R);

  auto csv = divergence_csv(rep, "relative divergence samples");
  auto upper = divergence_table(problem.group, *atlas, DivergenceKind::upper, rhos, ns, range(lo, hi), opt, csv, rep);
  auto lower = divergence_table(problem.group, *atlas, DivergenceKind::lower, rhos, ns, range(lo, hi), opt, csv, rep);
  rep.files.emplace_back("divergence.csv", csv.str());

  bool exact = true;
  std::string bad;
  for (const auto* tbl : {&upper, &lower}) {
    for (const auto& s : tbl->samples) {
      auto want = static_cast<std::uint64_t>(s.params.n * s.params.r);
      if (s.value != want) {
        exact = false;
        bad += std::string(" ") + to_string(s.kind) + "@n=" + std::to_string(s.params.n) + ",r=" + std::to_string(s.params.r);
      }
    }
  }
  rep.check("delta = sigma = n r at every sample", exact, bad);

  Json cls = Json::object();
  Json fam = Json::object();
  for (const auto& [key, f] : upper.series) {
    auto cu = classify(f);
    auto cl = classify(lower.series.at(key));
    std::string label = "rho=" + key.first + ",n=" + std::to_string(key.second);
    cls["upper " + label] = to_json(cu);
    cls["lower " + label] = to_json(cl);
    auto d = dominates(lower.series.at(key), f);
    fam[label] = to_json(d);
    rep.check("upper profile " + label + " linear", cu.cls == GrowthClass::linear, to_string(cu.cls));
    rep.check("lower profile " + label + " linear", cl.cls == GrowthClass::linear, to_string(cl.cls));
  }
  rep.data["classification"] = cls;
  rep.data["lower_dominated_by_upper"] = fam;

  // Axis divergence of <a>.
  CsvTable axis({"r", "value", "pair_count", "flag", "witness"});
  add_header(axis, rep, "axis divergence of <a>");
  for (int r = 1; r <= hi; ++r) {
    auto s = axis_divergence(problem.group, *atlas, 0, r);
    axis.row({std::to_string(r), format_value(s.value), std::to_string(s.pair_count), to_string(s.flag), witness_text(problem.group, *atlas, s)});
  }
  rep.files.emplace_back("axis.csv", axis.str());

  // Filtered ends over three atlas radii.
  std::vector<std::shared_ptr<const AnnotatedBall>> keep;
  std::vector<const AnnotatedBall*> atlases;
  for (int Rs : {8, 12, 16}) {
    keep.push_back(store.get(problem, Rs));
    atlases.push_back(keep.back().get());
  }
  auto ends = filtered_ends_profile(atlases, {1, 2, 3});
  CsvTable et({"r", "estimate", "frontier_radius", "stabilized"});
  add_header(et, rep, "deep complement components");
  for (const auto& row : ends.rows) {
    et.row({std::to_string(row.r), std::to_string(row.estimate), std::to_string(row.frontier_radius), row.stabilized ? "1" : "0"});
  }
  rep.files.emplace_back("ends.csv", et.str());
  rep.check("filtered-ends estimate 2, stabilized", ends.estimate() == 2 && ends.stabilized(),
            std::to_string(ends.estimate()));
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

/// F2 with <a>: the tree case.
inline RecipeReport recipe_f2_axis(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "f2-axis";
  rep.statement = "for <a> in the free group F2 the lower relative divergence is infinite and the axis cannot be bypassed";
  auto [lo, hi] = opt.radii.value_or(std::pair{1, 3});
  const int R = std::max({3 * hi, 2 * hi + 2, 12});
  auto problem = shipped::problem(shipped::group_f2(), shipped::subgroup_f2_a(), R);
  rep.digest = problem.digest();
  AtlasStore store(opt);
  auto atlas = store.get(problem, R);

  CsvTable growth_csv({"r", "count", "closed_form"});
  add_header(growth_csv, rep, "ball sizes, closed form 2*3^r - 1");
  bool counts = true;
  std::uint64_t pow3 = 1;
  for (int r = 0; r <= R; ++r, pow3 *= 3) {
    auto c = growth(atlas->base(), r);
    counts = counts && c == 2 * pow3 - 1;
    growth_csv.row({std::to_string(r), std::to_string(c), std::to_string(2 * pow3 - 1)});
  }
  rep.files.emplace_back("growth.csv", growth_csv.str());
  rep.check("ball counts equal 2*3^r - 1 for r <= " + std::to_string(R), counts);

  auto csv = divergence_csv(rep, "lower relative divergence");
  auto rho = opt.rho.value_or(std::pair<std::int64_t, std::int64_t>{1, 1});
  auto lower = divergence_table(problem.group, *atlas, DivergenceKind::lower, {rho}, {opt.n.value_or(2)}, range(lo, hi), opt, csv, rep);
  rep.files.emplace_back("divergence.csv", csv.str());
  bool all_inf = true;
  for (const auto& s : lower.samples) all_inf = all_inf && s.infinite();
  rep.check("sigma = inf at every sampled r", all_inf);

  CsvTable axis({"r", "value", "pair_count", "flag", "witness"});
  add_header(axis, rep, "axis divergence of <a>");
  bool axis_inf = true;
  for (int r = 1; 3 * r <= atlas->valid_core; ++r) {
    auto s = axis_divergence(problem.group, *atlas, 0, r);
    axis_inf = axis_inf && s.infinite();
    axis.row({std::to_string(r), format_value(s.value), std::to_string(s.pair_count), to_string(s.flag), ""});
  }
  rep.files.emplace_back("axis.csv", axis.str());
  rep.check("axis divergence = inf", axis_inf);
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

/// Right-angled Coxeter group of the pentagon with H = <s1 s3>.
inline RecipeReport recipe_pentagon_lower_div(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "pentagon-lower-div";
  rep.statement = "in a one-ended hyperbolic group the lower relative divergence with respect to a quasiconvex "
                  "cyclic subgroup is at least exponential";
  auto [lo, hi] = opt.radii.value_or(std::pair{2, 4});
  const int R = 14;
  if (hi > R / 2) throw RadiusError("pentagon-lower-div: radii beyond " + std::to_string(R / 2) + " need a larger atlas", 2 * hi);
  auto problem = shipped::problem(shipped::group_pentagon(), shipped::subgroup_pentagon_s1s3(), R);
  rep.digest = problem.digest();
  AtlasStore store(opt);
  auto atlas = store.get(problem, R);

  CsvTable gt({"r", "count"});
  add_header(gt, rep, "growth");
  SampledFunction growth_f;
  growth_f.provenance = "growth";
  for (int r = 0; r <= R; ++r) {
    auto c = growth(atlas->base(), r);
    gt.row({std::to_string(r), std::to_string(c)});
    if (r >= 2 && r <= 8) growth_f.add(r, static_cast<double>(c));
  }
  rep.files.emplace_back("growth.csv", gt.str());
  auto cg = classify(growth_f);
  rep.check("growth on r=2..8 classified exponential", cg.cls == GrowthClass::exponential, to_string(cg.cls));

  auto rho = opt.rho.value_or(std::pair<std::int64_t, std::int64_t>{1, 2});
  const int n = opt.n.value_or(2);
  auto csv = divergence_csv(rep, "lower relative divergence (upper bounds)");
  auto lower = divergence_table(problem.group, *atlas, DivergenceKind::lower, {rho}, {n}, range(lo, hi), opt, csv, rep);
  auto extended = divergence_table(problem.group, *atlas, DivergenceKind::lower, {rho}, {n}, range(hi + 1, R / 2), opt, csv, rep);
  rep.files.emplace_back("divergence.csv", csv.str());
  bool floor_ok = true;
  for (const auto& s : lower.samples) floor_ok = floor_ok && (s.infinite() || *s.value >= static_cast<std::uint64_t>(n * s.params.r));
  rep.check("sigma(r) >= n r at every sampled r", floor_ok);
  const auto& series = lower.series.begin()->second;
  auto cl = classify(series);
  const bool superlinear = cl.cls == GrowthClass::exponential || cl.cls == GrowthClass::infinite ||
                           (cl.cls == GrowthClass::polynomial && cl.rounded_degree >= 2);
  // The value pattern itself, independent of the fit: sigma(r) - n r.
  std::string excess;
  for (const auto& s : lower.samples) excess += " " + (s.value ? std::to_string(*s.value - static_cast<std::uint64_t>(n * s.params.r)) : "inf");
  rep.check("lower-divergence profile on r=" + std::to_string(lo) + ".." + std::to_string(hi) + " superlinear",
            superlinear, std::string(to_string(cl.cls)) + "/" + to_string(cl.leaning) + "; sigma - nr:" + excess);
  rep.data["classification"] = {{"growth", to_json(cg)}, {"lower", to_json(cl)},
                                {"lower_extended", to_json(classify(extended.series.begin()->second))}};
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

inline RecipeReport recipe_gromov_witness(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "gromov-witness";
  rep.statement = "in <a,b,c | bab^-1=a^2, cbc^-1=b^2> the word c^n b c^-n a c^n b^-1 c^-n equals a^(2^(2^n))";
  rep.digest = fnv1a("gromov:bab^-1=a^2;cbc^-1=b^2");
  int lo = 0, hi = 4;
  if (opt.n) lo = hi = *opt.n;
  if (opt.radii) std::tie(lo, hi) = *opt.radii;
  CsvTable t({"n", "witness", "witness_length", "target_exponent", "law_applications", "verified"});
  add_header(t, rep, "symbolic verification with the two defining laws");
  for (int n = lo; n <= hi; ++n) {
    auto w = gromov_witness(n);
    t.row({std::to_string(n), w.witness.to_string(), std::to_string(w.witness_length), w.target_exponent.str(),
           w.law_applications.str(), w.verified ? "true" : "false"});
    const BigInt expected = BigInt(1) << (1u << static_cast<unsigned>(n));
    rep.check("n=" + std::to_string(n) + ": verified, target a^(2^(2^n)), " + std::to_string(w.witness_length) + " letters",
              w.verified && w.target_exponent == expected && w.witness_length == static_cast<std::uint64_t>(4 * n + 3),
              "target exponent " + (n <= 5 ? w.target_exponent.str() : "2^" + std::to_string(1u << n)));
  }
  rep.files.emplace_back("witness.csv", t.str());
  return rep;
}

inline RecipeReport recipe_ends_survey(const RunOptions& opt) {
  using namespace recipe_detail;
  RecipeReport rep;
  rep.recipe = "ends-survey";
  rep.statement = "filtered ends: 2 for the axis in Z^2, 1 for the centre of the Heisenberg group, 0 for a "
                  "finite-index subgroup; unbounded for <a> in F2";
  AtlasStore store(opt);
  CsvTable t({"pair", "r", "R", "deep_components", "frontier_components", "components"});
  add_header(t, rep, "complement components per atlas radius");
  struct Case {
    std::string name;
    Json group, subgroup;
    std::vector<int> Rs;
    std::vector<int> rs;
    std::optional<std::size_t> expected;
  };
  std::vector<Case> cases = {
      {"z2/axis", shipped::group_z2(), shipped::subgroup_z2_axis(), {8, 12, 16}, {1, 2, 3}, 2},
      {"heisenberg/center", shipped::group_heisenberg_abc(), shipped::subgroup_heisenberg_center(), {8, 10, 12}, {1, 2, 3}, 1},
      {"z2/sublattice(a^2,b^2)", shipped::group_z2(), shipped::subgroup_z2_sublattice(), {8, 12, 16}, {1}, 0},
      {"f2/<a>", shipped::group_f2(), shipped::subgroup_f2_a(), {6, 8, 10}, {1, 2}, std::nullopt},
  };
  std::uint64_t digest = 0;
  Json out = Json::object();
  for (const auto& c : cases) {
    std::vector<std::shared_ptr<const AnnotatedBall>> keep;
    std::vector<const AnnotatedBall*> atlases;
    for (int R : c.Rs) {
      auto p = shipped::problem(c.group, c.subgroup, R);
      digest = fnv1a(hex64(p.digest()), digest);
      keep.push_back(store.get(p, R));
      atlases.push_back(keep.back().get());
    }
    for (const auto* a : atlases) {
      for (int r : c.rs) {
        if (r > a->valid_core) continue;
        auto lab = complement_components(*a, r);
        t.row({c.name, std::to_string(r), std::to_string(a->radius()), std::to_string(lab.deep_count()),
               std::to_string(lab.frontier_count()), std::to_string(lab.count())});
      }
    }
    auto prof = filtered_ends_profile(atlases, c.rs);
    out[c.name] = {{"estimate", prof.estimate()}, {"stabilized", prof.stabilized()}};
    if (c.expected) {
      rep.check(c.name + ": estimate " + std::to_string(*c.expected) + ", stabilized",
                prof.estimate() == *c.expected && prof.stabilized(), std::to_string(prof.estimate()));
    } else {
      const auto& series = prof.rows.back().series;
      bool growing = series.size() >= 2 && series.back().second > series.front().second;
      rep.check(c.name + ": estimate keeps growing with R", growing, std::to_string(prof.estimate()));
    }
  }
  rep.digest = digest;
  rep.files.emplace_back("ends.csv", t.str());
  rep.data["ends"] = out;
  rep.files.emplace_back("summary.json", rep.data.dump(2) + "\n");
  return rep;
}

inline const std::vector<std::pair<std::string, std::function<RecipeReport(const RunOptions&)>>>& recipes() {
  static const std::vector<std::pair<std::string, std::function<RecipeReport(const RunOptions&)>>> list = {
      {"heisenberg-divergence", recipe_heisenberg_divergence},
      {"heisenberg-distortion", recipe_heisenberg_distortion},
      {"z2-axis", recipe_z2_axis},
      {"f2-axis", recipe_f2_axis},
      {"pentagon-lower-div", recipe_pentagon_lower_div},
      {"gromov-witness", recipe_gromov_witness},
      {"ends-survey", recipe_ends_survey},
  };
  return list;
}

inline RecipeReport run_recipe(const std::string& name, const RunOptions& opt) {
  for (const auto& [n, fn] : recipes()) {
    if (n == name) return fn(opt);
  }
  throw ConfigError("unknown recipe '" + name + "'");
}

}  // namespace reldiv
