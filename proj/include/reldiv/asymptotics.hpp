#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "reldiv/errors.hpp"

namespace reldiv {

/// Samples (r, f(r)) of a function [0, inf) -> [0, inf]. An empty value is
/// infinity.
struct SampledFunction {
  struct Point {
    double r = 0;
    std::optional<double> value;
  };
  std::vector<Point> points;
  std::string provenance;

  void add(double r, std::optional<double> v) { points.push_back({r, v}); }

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i && !(points[i].r > points[i - 1].r)) throw InputError("sampled radii must be strictly increasing");
      if (points[i].value && (*points[i].value < 0 || !std::isfinite(*points[i].value))) {
        throw InputError("sampled values must be nonnegative");
      }
    }
  }

  /// Value at x: exact at a sample, linear between neighbouring finite
  /// samples, empty outside the sampled range or next to an infinite sample.
  std::optional<double> at(double x) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].r == x) return points[i].value;
      if (points[i].r > x) {
        if (i == 0 || !points[i].value || !points[i - 1].value) return std::nullopt;
        const auto& lo = points[i - 1];
        const auto& hi = points[i];
        double t = (x - lo.r) / (hi.r - lo.r);
        return *lo.value + t * (*hi.value - *lo.value);
      }
    }
    return std::nullopt;
  }

  /// Whether g(x) is known to be infinite at x.
  bool infinite_at(double x) const {
    for (const auto& p : points) {
      if (p.r == x) return !p.value.has_value();
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Domination f <= g:  f(x) <= g(A x) + B x for all sampled x > C.

enum class DominationVerdict { holds, fails, indeterminate };

inline const char* to_string(DominationVerdict v) {
  switch (v) {
    case DominationVerdict::holds:
      return "true";
    case DominationVerdict::fails:
      return "false";
    case DominationVerdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

struct DominationGrid {
  int a_max = 8;
  int b_min = 0;
  int b_max = 8;
  /// Checkable samples that must lie beyond C for a verdict.
  std::size_t min_tail = 3;
};

struct DominationResult {
  DominationVerdict verdict = DominationVerdict::indeterminate;
  int A = 0;
  int B = 0;
  double C = 0;
  std::size_t checked = 0;
  std::string note;
};

/// Searches A in 1..a_max, then B in b_min..b_max, for the first pair under
/// which the inequality holds at every sample beyond C, with at least
/// min_tail of them. C is the largest radius that fails or cannot be checked,
/// or just below the first sample. A sample x is checkable when g(Ax) is known
/// (sampled or interpolated); infinite g(Ax) satisfies anything, infinite
/// f(x) against finite g fails. Unknown g(Ax) breaks the tail, so a large A
/// cannot hide the top of f's range.
inline DominationResult dominates(const SampledFunction& f, const SampledFunction& g, const DominationGrid& grid = {}) {
  f.validate();
  g.validate();
  DominationResult out;
  std::size_t best_tail = 0;
  bool top_checkable = false;
  for (int A = 1; A <= grid.a_max; ++A) {
    for (int B = grid.b_min; B <= grid.b_max; ++B) {
      double c = f.points.empty() ? 0 : f.points.front().r - 1;
      std::size_t tail = 0;
      for (const auto& p : f.points) {
        const double ax = A * p.r;
        bool ok;
        if (g.infinite_at(ax)) {
          ok = true;
        } else if (auto gv = g.at(ax)) {
          ok = p.value && *p.value <= *gv + B * p.r + 1e-9;
        } else {
          ok = false;
        }
        if (ok) {
          ++tail;
        } else {
          c = p.r;
          tail = 0;
        }
        if (&p == &f.points.back() && (ok || g.at(ax) || g.infinite_at(ax))) top_checkable = true;
      }
      best_tail = std::max(best_tail, tail);
      if (tail >= grid.min_tail) {
        out.verdict = DominationVerdict::holds;
        out.A = A;
        out.B = B;
        out.C = c;
        out.checked = tail;
        return out;
      }
    }
  }
  if (!top_checkable || f.points.size() < grid.min_tail) {
    out.verdict = DominationVerdict::indeterminate;
    out.note = "insufficient overlap between the sampled ranges";
  } else {
    out.verdict = DominationVerdict::fails;
    out.note = "no (A, B) on the grid satisfies the inequality on a tail of " + std::to_string(grid.min_tail) + " samples";
  }
  out.checked = best_tail;
  return out;
}

struct EquivalenceResult {
  DominationResult forward;   // f <= g
  DominationResult backward;  // g <= f
  DominationVerdict verdict() const {
    if (forward.verdict == DominationVerdict::holds && backward.verdict == DominationVerdict::holds) return DominationVerdict::holds;
    if (forward.verdict == DominationVerdict::fails || backward.verdict == DominationVerdict::fails) return DominationVerdict::fails;
    return DominationVerdict::indeterminate;
  }
};

inline EquivalenceResult equivalent(const SampledFunction& f, const SampledFunction& g, const DominationGrid& grid = {}) {
  return {dominates(f, g, grid), dominates(g, f, grid)};
}

/// Family comparison at matched parameter points: entry i compares f[i] with g[i].
struct FamilyCell {
  std::string label;
  DominationResult result;
};

inline std::vector<FamilyCell> compare_families(const std::vector<std::pair<std::string, std::pair<SampledFunction, SampledFunction>>>& cells,
                                                const DominationGrid& grid = {}) {
  std::vector<FamilyCell> out;
  for (const auto& [label, fg] : cells) out.push_back({label, dominates(fg.first, fg.second, grid)});
  return out;
}

// ---------------------------------------------------------------------------
// Growth classes

enum class GrowthClass { bounded, linear, polynomial, exponential, infinite, indeterminate };

inline const char* to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::bounded:
      return "bounded";
    case GrowthClass::linear:
      return "linear";
    case GrowthClass::polynomial:
      return "polynomial";
    case GrowthClass::exponential:
      return "exponential";
    case GrowthClass::infinite:
      return "infinite";
    case GrowthClass::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  /// Root mean square of the residuals.
  double rms = 0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = x.size();
  if (x.size() < 2) return f;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.rms = std::sqrt(rss / n);
  f.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0;
  return f;
}

struct ClassifyOptions {
  std::size_t min_samples = 4;
  /// Residuals within this relative margin of each other are "comparable".
  double margin = 0.1;
  /// Residual floor below which a fit counts as exact.
  double exact_rms = 1e-9;
};

struct GrowthClassReport {
  GrowthClass cls = GrowthClass::indeterminate;
  /// Best guess when cls is indeterminate (never infinite).
  GrowthClass leaning = GrowthClass::indeterminate;
  double degree = 0;  // log-log slope over the fit window
  int rounded_degree = 0;
  double degree_lo = 0;
  double degree_hi = 0;
  double exp_rate = 0;  // log-linear slope over the fit window
  double poly_rms = 0;
  double exp_rms = 0;
  std::size_t finite_samples = 0;
  std::size_t infinite_samples = 0;
  std::size_t window = 0;
  double window_start = 0;
  std::string note;
};

namespace asymptotics_detail {

inline GrowthClass polynomial_class(int rounded) {
  if (rounded <= 0) return GrowthClass::bounded;
  if (rounded == 1) return GrowthClass::linear;
  return GrowthClass::polynomial;
}

}  // namespace asymptotics_detail

/// Fits log f against log r (polynomial) and against r (exponential) over the
/// asymptotic window, the last max(min_samples, ceil(m/2)) of the m positive
/// finite samples, and keeps the model with the smaller residual. Comparable
/// residuals give indeterminate, with the better model as the leaning.
/// Constant sequences are bounded; zero values are left out of the fits.
inline GrowthClassReport classify(const SampledFunction& f, const ClassifyOptions& opt = {}) {
  f.validate();
  GrowthClassReport rep;
  std::vector<double> rs, vs;
  std::optional<double> lo_v, hi_v;
  for (const auto& p : f.points) {
    if (!p.value) {
      ++rep.infinite_samples;
      continue;
    }
    ++rep.finite_samples;
    lo_v = lo_v ? std::min(*lo_v, *p.value) : *p.value;
    hi_v = hi_v ? std::max(*hi_v, *p.value) : *p.value;
    if (*p.value > 0 && p.r > 0) {
      rs.push_back(p.r);
      vs.push_back(*p.value);
    }
  }
  if (rep.finite_samples == 0) {
    rep.cls = rep.infinite_samples ? GrowthClass::infinite : GrowthClass::indeterminate;
    rep.note = rep.infinite_samples ? "every sample is infinite" : "no samples";
    return rep;
  }
  if (rep.infinite_samples) rep.note = std::to_string(rep.infinite_samples) + " infinite samples left out of the fits; ";

  const std::size_t m = rs.size();
  const std::size_t w = std::min(m, std::max(opt.min_samples, (m + 1) / 2));
  std::vector<double> lx, x, ly;
  for (std::size_t i = m - w; i < m; ++i) {
    lx.push_back(std::log(rs[i]));
    x.push_back(rs[i]);
    ly.push_back(std::log(vs[i]));
  }
  rep.window = w;
  rep.window_start = w ? rs[m - w] : 0;
  const LineFit poly = fit_line(lx, ly);
  const LineFit expo = fit_line(x, ly);
  rep.degree = poly.slope;
  rep.degree_lo = poly.slope - 2 * poly.slope_se;
  rep.degree_hi = poly.slope + 2 * poly.slope_se;
  rep.rounded_degree = static_cast<int>(std::lround(poly.slope));
  rep.exp_rate = expo.slope;
  rep.poly_rms = poly.rms;
  rep.exp_rms = expo.rms;

  const bool constant = *lo_v == *hi_v;
  if (constant) {
    rep.leaning = GrowthClass::bounded;
    rep.rounded_degree = 0;
  } else if (w >= 2) {
    const double best = std::min(poly.rms, expo.rms);
    const double worst = std::max(poly.rms, expo.rms);
    const bool comparable = worst <= opt.exact_rms || (best > opt.exact_rms && worst - best <= opt.margin * worst);
    const GrowthClass poly_cls = asymptotics_detail::polynomial_class(rep.rounded_degree);
    // Equal residuals prefer polynomial.
    rep.leaning = poly.rms <= expo.rms ? poly_cls : GrowthClass::exponential;
    if (comparable && rep.leaning != GrowthClass::bounded) {
      rep.cls = GrowthClass::indeterminate;
      rep.note += "polynomial and exponential residuals are within the margin";
      return rep;
    }
  }
  if (rep.finite_samples < opt.min_samples || (!constant && m < opt.min_samples)) {
    rep.cls = GrowthClass::indeterminate;
    rep.note += "fewer than " + std::to_string(opt.min_samples) + " usable samples";
    return rep;
  }
  rep.cls = rep.leaning;
  rep.note += "empirical, desk-scale";
  return rep;
}

}  // namespace reldiv
