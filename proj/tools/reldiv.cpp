// reldiv: command-line front end.

#include <filesystem>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "reldiv/recipes.hpp"
#include "reldiv/rewriting.hpp"

namespace fs = std::filesystem;
using namespace reldiv;

namespace {

enum Exit { kOk = 0, kCheckFailed = 2, kBudget = 3, kConfig = 4 };

struct Flags {
  std::string group, subgroup;
  std::string radii, rho;
  std::optional<int> n;
  std::string atlas, atlas_cache, out;
  unsigned threads = 1;
  std::size_t budget_elems = 10'000'000;
  std::uint64_t budget_pairs = 50'000'000;
};

std::pair<int, int> parse_radii(const std::string& s) {
  static const std::regex re(R"(\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("--radii expects a..b, got '" + s + "'");
  int lo = std::stoi(m[1]);
  int hi = m[2].matched ? std::stoi(m[2]) : lo;
  if (lo > hi) throw ConfigError("--radii: empty range " + s);
  return {lo, hi};
}

std::pair<std::int64_t, std::int64_t> parse_rho(const std::string& s) {
  static const std::regex re(R"(\s*(\d+)\s*(?:/\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("--rho expects P/Q, got '" + s + "'");
  std::int64_t p = std::stoll(m[1]);
  std::int64_t q = m[2].matched ? std::stoll(m[2]) : 1;
  if (p <= 0 || q <= 0) throw ConfigError("--rho must be positive");
  return {p, q};
}

void add_common(CLI::App* app, Flags& f, bool problem = true) {
  if (problem) {
    app->add_option("--group", f.group, "group config (JSON)")->required();
    app->add_option("--subgroup", f.subgroup, "subgroup config (JSON)")->required();
  }
  app->add_option("--atlas-cache", f.atlas_cache, "atlas cache directory (overrides $RELDIV_CACHE_DIR)");
  app->add_option("--out", f.out, "output file or directory");
  app->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app->add_option("--budget-elems", f.budget_elems, "ball element budget")->check(CLI::PositiveNumber);
  app->add_option("--budget-pairs", f.budget_pairs, "divergence pair budget")->check(CLI::PositiveNumber);
}

RunOptions run_options(const Flags& f) {
  RunOptions o;
  o.threads = f.threads;
  o.element_budget = f.budget_elems;
  o.pair_budget = f.budget_pairs;
  if (!f.atlas_cache.empty()) o.cache_dir = f.atlas_cache;
  if (!f.radii.empty()) o.radii = parse_radii(f.radii);
  if (!f.rho.empty()) o.rho = parse_rho(f.rho);
  o.n = f.n;
  return o;
}

Problem load_problem(const Flags& f, int atlas_radius) {
  return make_problem(load_group_config(f.group), load_subgroup_config(f.subgroup), atlas_radius);
}

/// Radius needed for a certified core of `core`.
int radius_for_core(const Problem& p, int core) { return p.subgroup.exact_distance ? core : 2 * core; }

std::shared_ptr<const AnnotatedBall> obtain_atlas(const Flags& f, const Problem& p, int radius, AtlasStore& store) {
  if (!f.atlas.empty()) return std::make_shared<const AnnotatedBall>(load_ball(p.group, f.atlas, f.threads));
  return store.get(p, radius);
}

/// --out handling: a path ending in .csv/.json is a single file, anything else
/// a directory. Empty means stdout.
void emit(const Flags& f, const std::string& stem, const std::string& csv, const std::string& json) {
  if (f.out.empty()) {
    std::cout << csv;
    return;
  }
  fs::path out(f.out);
  if (out.extension() == ".csv") {
    write_file(out.string(), csv);
  } else if (out.extension() == ".json") {
    write_file(out.string(), json);
  } else {
    fs::create_directories(out);
    write_file((out / (stem + ".csv")).string(), csv);
    write_file((out / (stem + ".json")).string(), json);
  }
}

void meta_header(CsvTable& t, const Problem& p, const std::string& what) {
  t.meta("tool", std::string("reldiv ") + kToolVersion);
  t.meta("config-digest", hex64(p.digest()));
  t.meta("table", what);
}

// ---------------------------------------------------------------------------

int cmd_atlas_build(const Flags& f, int radius) {
  auto p = load_problem(f, radius);
  EnumerateOptions eo;
  eo.threads = f.threads;
  eo.element_budget = f.budget_elems;
  auto ball = std::make_shared<const BallIndex>(enumerate_ball(p.group, radius, eo));
  AnnotatedBall a = annotate_subgroup_distance(p.group, ball, p.subgroup, DistanceMode::automatic, f.threads);
  if (f.out.empty()) throw ConfigError("atlas build: --out <file> is required");
  save_ball(a, f.out);
  std::cout << "atlas R=" << radius << " elements=" << a.size() << " valid_core=" << a.valid_core
            << " distances=" << (a.source == DistanceSource::formula ? "formula" : "bfs") << " -> " << f.out << "\n";
  return kOk;
}

int cmd_invariants(const Flags& f, const std::string& which) {
  auto [lo, hi] = parse_radii(f.radii.empty() ? "1..4" : f.radii);
  AtlasStore store(run_options(f));
  Json j = Json::object();
  if (which == "growth" || which == "distortion") {
    auto p = load_problem(f, hi);
    auto a = obtain_atlas(f, p, which == "distortion" ? 2 * hi : hi, store);
    j["config_digest"] = hex64(p.digest());
    if (which == "growth") {
      CsvTable t({"r", "count"});
      meta_header(t, p, "growth");
      for (int r = lo; r <= hi; ++r) {
        auto c = growth(a->base(), r);
        t.row({std::to_string(r), std::to_string(c)});
        j["rows"].push_back({{"r", r}, {"count", c}});
      }
      emit(f, "growth", t.str(), j.dump(2) + "\n");
      return kOk;
    }
    CsvTable t({"r", "Dist", "dist", "Dist_2r", "Growth_2r", "Dist_witness", "dist_witness"});
    meta_header(t, p, "distortion");
    bool ok = true;
    for (int r = lo; r <= hi; ++r) {
      auto u = upper_distortion(p.group, *a, p.subgroup, r);
      auto l = lower_distortion(p.group, *a, p.subgroup, r);
      auto u2 = upper_distortion(p.group, *a, p.subgroup, 2 * r);
      auto g2 = growth(a->base(), 2 * r);
      ok = ok && l.value <= u2.value && l.value <= g2;
      std::string uw = u.witness ? p.group.describe(*u.witness) : "";
      std::string lw = l.witness ? p.group.describe(*l.witness) : "";
      t.row({std::to_string(r), std::to_string(u.value), std::to_string(l.value), std::to_string(u2.value), std::to_string(g2), uw, lw});
      j["rows"].push_back({{"r", r}, {"Dist", u.value}, {"dist", l.value}, {"Dist_2r", u2.value}, {"Growth_2r", g2},
                           {"Dist_witness", uw}, {"dist_witness", lw}, {"dist_note", l.note}});
    }
    j["dist_le_Dist_2r_and_Growth_2r"] = ok;
    emit(f, "distortion", t.str(), j.dump(2) + "\n");
    return ok ? kOk : kCheckFailed;
  }
  if (which == "ends") {
    auto probe = load_problem(f, 4 * hi + 4);
    std::vector<std::shared_ptr<const AnnotatedBall>> keep;
    std::vector<const AnnotatedBall*> atlases;
    const int base = radius_for_core(probe, hi);
    for (int R : {base + 2, base + 4, base + 6}) {
      keep.push_back(store.get(probe, R));
      atlases.push_back(keep.back().get());
    }
    std::vector<int> rs;
    for (int r = lo; r <= hi; ++r) rs.push_back(r);
    auto prof = filtered_ends_profile(atlases, rs);
    CsvTable t({"r", "R", "deep_components"});
    meta_header(t, probe, "deep complement components per atlas radius");
    for (const auto& row : prof.rows) {
      for (auto [R, c] : row.series) t.row({std::to_string(row.r), std::to_string(R), std::to_string(c)});
      j["rows"].push_back({{"r", row.r}, {"estimate", row.estimate}, {"frontier_radius", row.frontier_radius}, {"stabilized", row.stabilized}});
    }
    j["estimate"] = prof.estimate();
    j["stabilized"] = prof.stabilized();
    j["config_digest"] = hex64(probe.digest());
    emit(f, "ends", t.str(), j.dump(2) + "\n");
    return kOk;
  }
  // ray
  auto p = load_problem(f, hi);
  auto a = obtain_atlas(f, p, radius_for_core(p, hi), store);
  auto path = perpendicular_ray_prefix(*a, hi);
  CsvTable t({"t", "element", "dist_to_H"});
  meta_header(t, p, "H-perpendicular geodesic prefix from e");
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::string e = p.group.describe(Element(a->base().element(path[i])));
    t.row({std::to_string(i), e, std::to_string(a->dist_to_h[path[i]])});
    j["path"].push_back(e);
  }
  j["config_digest"] = hex64(p.digest());
  emit(f, "ray", t.str(), j.dump(2) + "\n");
  return kOk;
}

int cmd_divergence(const Flags& f, const std::string& which, const std::string& h_label) {
  auto [lo, hi] = parse_radii(f.radii.empty() ? "1..4" : f.radii);
  auto [num, den] = parse_rho(f.rho.empty() ? "1/2" : f.rho);
  const int n = f.n.value_or(2);
  if (n < 1) throw ConfigError("--n must be at least 1");
  auto probe = load_problem(f, hi * (n + 1));
  const int core = which == "upper" ? hi * (n + 1) : which == "lower" ? hi * (n + 1) : 3 * hi;
  const int R = radius_for_core(probe, core);
  auto p = load_problem(f, R);
  AtlasStore store(run_options(f));
  auto a = obtain_atlas(f, p, R, store);

  std::vector<int> radii;
  for (int r = lo; r <= hi; ++r) radii.push_back(r);
  std::vector<ProfileRow> rows;
  DivergenceKind kind = which == "upper" ? DivergenceKind::upper : which == "lower" ? DivergenceKind::lower : DivergenceKind::axis;
  if (kind == DivergenceKind::axis) {
    std::string label = h_label;
    if (label.empty()) {
      if (p.subgroup.generating_words.size() != 1 || p.subgroup.generating_words[0].size() != 1) {
        throw ConfigError("divergence axis: H must be cyclic on a generator; pass --axis-generator");
      }
      label = p.group.alphabet().label(p.subgroup.generating_words[0][0]);
    }
    Word hw = p.group.alphabet().parse(label);
    if (hw.size() != 1) throw ConfigError("divergence axis: --axis-generator must be a single generator");
    rows = axis_profile(p.group, *a, hw[0], radii);
  } else {
    DivergenceParams base;
    base.rho_num = num;
    base.rho_den = den;
    base.n = n;
    DivergenceOptions dopt;
    dopt.threads = f.threads;
    dopt.pair_budget = f.budget_pairs;
    rows = divergence_profile(*a, kind, base, radii, dopt);
  }
  CsvTable t({"r", "value", "pair_count", "flag", "witness"});
  meta_header(t, p, std::string(to_string(kind)) + " divergence, rho=" + std::to_string(num) + "/" + std::to_string(den) +
                        ", n=" + std::to_string(n));
  Json j = {{"config_digest", hex64(p.digest())}, {"kind", to_string(kind)}, {"rho", std::to_string(num) + "/" + std::to_string(den)},
            {"n", n}, {"rows", Json::array()}};
  int status = kOk;
  for (const auto& row : rows) {
    if (!row.sample) {
      std::cerr << "r=" << row.r << ": " << row.error << "\n";
      status = kBudget;
      continue;
    }
    const auto& s = *row.sample;
    std::string w;
    if (s.witness_pair) {
      w = p.group.describe(Element(a->base().element(s.witness_pair->first))) + " -> " +
          p.group.describe(Element(a->base().element(s.witness_pair->second)));
    }
    if (s.pruned) status = kBudget;
    t.row({std::to_string(row.r), format_value(s.value), std::to_string(s.pair_count), to_string(s.flag), w});
    j["rows"].push_back({{"r", row.r}, {"value", s.value ? Json(*s.value) : Json("inf")}, {"pair_count", s.pair_count},
                         {"flag", to_string(s.flag)}, {"pruned", s.pruned}, {"witness", w}, {"note", s.note}});
  }
  emit(f, std::string("divergence-") + to_string(kind), t.str(), j.dump(2) + "\n");
  return status;
}

int cmd_classify(const std::string& in, const std::string& out, const std::string& column, const std::string& against) {
  std::ifstream file(in);
  if (!file) throw ConfigError("cannot open " + in);
  auto data = parse_csv(file);
  auto f = sampled_from_csv(data, "r", column);
  auto report = classify(f);
  Json j = {{"input", in}, {"column", column}, {"label", "empirical, desk-scale"}, {"classification", to_json(report)}};
  j["slope"] = report.cls == GrowthClass::exponential ? report.exp_rate : report.degree;
  j["residuals"] = {{"polynomial_rms", report.poly_rms}, {"exponential_rms", report.exp_rms}};
  SampledFunction linear;
  linear.provenance = "r";
  for (const auto& pt : f.points) linear.add(pt.r, pt.r);
  j["domination"] = {{"f_dominated_by_r", to_json(dominates(f, linear))}, {"r_dominated_by_f", to_json(dominates(linear, f))}};
  if (!against.empty()) {
    std::ifstream other(against);
    if (!other) throw ConfigError("cannot open " + against);
    auto od = parse_csv(other);
    auto g = sampled_from_csv(od, "r", column);
    j["domination"]["f_dominated_by_g"] = to_json(dominates(f, g));
    j["domination"]["g_dominated_by_f"] = to_json(dominates(g, f));
    j["against"] = against;
  }
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file(out, j.dump(2) + "\n");
  }
  std::cerr << "class: " << to_string(report.cls) << (report.cls == GrowthClass::indeterminate ? std::string(" (leaning ") + to_string(report.leaning) + ")" : "")
            << "\n";
  return kOk;
}

int cmd_plot(const std::string& in, const std::string& out) {
  std::ifstream file(in);
  if (!file) throw ConfigError("cannot open " + in);
  auto data = parse_csv(file);
  auto files = plot_series(data, fs::path(in).stem().string());
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  for (const auto& pf : files) {
    write_file((dir / pf.name).string(), pf.content);
    std::cout << (dir / pf.name).string() << ": " << pf.rows << " rows";
    if (pf.infinite) std::cout << ", " << pf.infinite << " infinite dropped";
    std::cout << "\n";
  }
  if (data.rows.empty()) std::cerr << "warning: " << in << " has no data rows\n";
  return kOk;
}

int cmd_rewrite_check(const std::string& path, const std::string& out, std::uint64_t budget) {
  auto sys = load_rules(path);
  auto rep = critical_pair_check(sys, budget);
  Json j = {{"file", path}, {"order", to_string(sys.order())}, {"rules", sys.rules().size()}, {"status", to_string(rep.status)},
            {"pairs_checked", rep.pairs_checked}, {"unresolved", Json::array()}};
  for (const auto& c : rep.unresolved) {
    j["unresolved"].push_back({{"rule_a", sys.format_rule(sys.rules()[c.rule_a])},
                               {"rule_b", sys.format_rule(sys.rules()[c.rule_b])},
                               {"inclusion", c.inclusion},
                               {"overlap", sys.alphabet().format(c.overlap)},
                               {"reduct_a", sys.alphabet().format(c.reduct_a)},
                               {"reduct_b", sys.alphabet().format(c.reduct_b)}});
  }
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file(out, j.dump(2) + "\n");
  }
  switch (rep.status) {
    case ConfluenceStatus::confluent: return kOk;
    case ConfluenceStatus::not_confluent: return kCheckFailed;
    default: return kBudget;
  }
}

int cmd_rewrite_normalize(const std::string& path, const std::vector<std::string>& words) {
  auto sys = load_rules(path);
  for (const auto& w : words) std::cout << sys.alphabet().format(sys.normalize(sys.alphabet().parse(w))) << "\n";
  return kOk;
}

int cmd_run(const Flags& f, const std::string& name) {
  auto rep = run_recipe(name, run_options(f));
  const fs::path dir = f.out.empty() ? fs::path("out") / name : fs::path(f.out);
  fs::create_directories(dir);
  for (const auto& [file, content] : rep.files) write_file((dir / file).string(), content);
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json j = {{"recipe", rep.recipe},   {"tool_version", kToolVersion}, {"config_digest", hex64(rep.digest)},
            {"statement", rep.statement}, {"checks", checks},        {"ok", rep.ok()},
            {"budget_exceeded", rep.budget_exceeded}};
  write_file((dir / "report.json").string(), j.dump(2) + "\n");
  const auto summary = rep.summary();
  write_file((dir / "summary.txt").string(), summary);
  std::cout << summary << "outputs: " << dir.string() << "\n";
  if (rep.budget_exceeded) return kBudget;
  return rep.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reldiv: relative divergence, distortion and filtered ends of subgroups on finite Cayley-graph balls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("reldiv ") + kToolVersion);
  Flags f;

  auto* atlas = app.add_subcommand("atlas", "ball atlases");
  atlas->require_subcommand(1);
  auto* atlas_build = atlas->add_subcommand("build", "enumerate and annotate a ball, write it to --out");
  int atlas_radius = 0;
  add_common(atlas_build, f);
  atlas_build->add_option("--radius,-R", atlas_radius, "ball radius")->required()->check(CLI::NonNegativeNumber);

  auto* inv = app.add_subcommand("invariants", "distortion, growth, filtered ends, perpendicular rays");
  std::string inv_kind;
  inv->add_option("kind", inv_kind, "distortion|growth|ends|ray")->required()->check(CLI::IsMember({"distortion", "growth", "ends", "ray"}));
  add_common(inv, f);
  inv->add_option("--radii", f.radii, "a..b");
  inv->add_option("--atlas", f.atlas, "prebuilt atlas file");

  auto* div = app.add_subcommand("divergence", "relative divergence samples");
  std::string div_kind, h_label;
  div->add_option("kind", div_kind, "upper|lower|axis")->required()->check(CLI::IsMember({"upper", "lower", "axis"}));
  add_common(div, f);
  div->add_option("--radii", f.radii, "a..b");
  div->add_option("--rho", f.rho, "P/Q");
  div->add_option("--n", f.n, "pair distance multiplier");
  div->add_option("--atlas", f.atlas, "prebuilt atlas file");
  div->add_option("--axis-generator", h_label, "axis generator (defaults to H's generator)");

  auto* cls = app.add_subcommand("classify", "classify a sampled profile");
  std::string cls_in, cls_out, cls_column = "value", cls_against;
  cls->add_option("--in", cls_in, "profile CSV")->required();
  cls->add_option("--out", cls_out, "JSON report");
  cls->add_option("--column", cls_column, "value column");
  cls->add_option("--against", cls_against, "second profile for domination checks");

  auto* rw = app.add_subcommand("rewrite", "string rewriting systems");
  rw->require_subcommand(1);
  auto* rw_check = rw->add_subcommand("check", "critical-pair confluence check, JSON report");
  std::string rules_file, rw_out;
  std::uint64_t rw_budget = 1'000'000;
  rw_check->add_option("file", rules_file, "rules file")->required();
  rw_check->add_option("--out", rw_out, "JSON report");
  rw_check->add_option("--budget", rw_budget, "rewrite step budget");
  auto* rw_norm = rw->add_subcommand("normalize", "normal forms of words");
  std::vector<std::string> words;
  rw_norm->add_option("file", rules_file, "rules file")->required();
  rw_norm->add_option("words", words, "words, letters separated by spaces")->required();

  auto* run = app.add_subcommand("run", "reproduction recipes");
  std::string recipe;
  bool list = false;
  std::vector<std::string> names;
  for (const auto& [name, fn] : recipes()) names.push_back(name);
  run->add_option("recipe", recipe, "recipe name")->check(CLI::IsMember(names));
  run->add_flag("--list", list, "list recipes");
  add_common(run, f, false);
  run->add_option("--radii", f.radii, "a..b");
  run->add_option("--rho", f.rho, "P/Q");
  run->add_option("--n", f.n, "n override");

  auto* plot = app.add_subcommand("plot-data", "two-column data files per series of a profile CSV");
  std::string plot_in, plot_out;
  plot->add_option("--in", plot_in, "profile CSV")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (atlas_build->parsed()) return cmd_atlas_build(f, atlas_radius);
    if (inv->parsed()) return cmd_invariants(f, inv_kind);
    if (div->parsed()) return cmd_divergence(f, div_kind, h_label);
    if (cls->parsed()) return cmd_classify(cls_in, cls_out, cls_column, cls_against);
    if (rw_check->parsed()) return cmd_rewrite_check(rules_file, rw_out, rw_budget);
    if (rw_norm->parsed()) return cmd_rewrite_normalize(rules_file, words);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out);
    if (run->parsed()) {
      if (list || recipe.empty()) {
        for (const auto& name : names) std::cout << name << "\n";
        return list ? kOk : kConfig;
      }
      return cmd_run(f, recipe);
    }
  } catch (const RadiusError& e) {
    std::cerr << "error: " << e.what();
    if (e.required_radius() > 0) std::cerr << " (needs an atlas of radius >= " << e.required_radius() << ")";
    std::cerr << "\n";
    return kBudget;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
