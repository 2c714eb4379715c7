#pragma once

/// \file fuzzy_set.hpp
/// Exact piecewise-linear fuzzy-set algebra: trapezoid terms, alpha-clipping,
/// union and centroid defuzzification.
///
/// Every set is stored as an ordered list of breakpoints with linear
/// interpolation in between and constant extension outside. Clip and union
/// insert the exact crossing points, so results stay piecewise linear and
/// the centroid is computed in closed form rather than on a sampled grid.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spldst {

/// Tolerance used when comparing breakpoint coordinates.
inline constexpr double kBreakpointTolerance = 1e-9;

/// Thrown when a set with zero area is defuzzified (no rule fired).
class EmptySetError : public std::runtime_error {
 public:
  EmptySetError() : std::runtime_error("cannot defuzzify a fuzzy set with zero area") {}
};

struct Breakpoint {
  double x;
  double mu;
};

class PiecewiseLinearSet {
 public:
  /// Throws std::invalid_argument unless x is strictly increasing, every mu
  /// lies in [0,1] and there are at least two points.
  explicit PiecewiseLinearSet(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
      throw std::invalid_argument("piecewise-linear set needs at least two breakpoints");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto& p = points_[i];
      if (!std::isfinite(p.x) || !std::isfinite(p.mu)) {
        throw std::invalid_argument("breakpoint coordinates must be finite");
      }
      if (p.mu < 0.0 || p.mu > 1.0) {
        throw std::invalid_argument("membership degree outside [0,1]");
      }
      if (i > 0 && !(p.x > points_[i - 1].x)) {
        throw std::invalid_argument("breakpoints must be strictly increasing in x");
      }
    }
  }

  /// The empty set over [lo, hi].
  static PiecewiseLinearSet zero(double lo, double hi) { return PiecewiseLinearSet({{lo, 0.0}, {hi, 0.0}}); }

  std::span<const Breakpoint> breakpoints() const { return points_; }
  double lower() const { return points_.front().x; }
  double upper() const { return points_.back().x; }

  double membership(double x) const {
    if (x <= points_.front().x) return points_.front().mu;
    if (x >= points_.back().x) return points_.back().mu;
    auto it = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const Breakpoint& p) { return v < p.x; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (x == lo.x) return lo.mu;
    const double t = (x - lo.x) / (hi.x - lo.x);
    return lo.mu + t * (hi.mu - lo.mu);
  }

  bool is_zero() const {
    return std::all_of(points_.begin(), points_.end(), [](const Breakpoint& p) { return p.mu == 0.0; });
  }

  /// Breakpoint-wise equality within \p tol on both coordinates.
  bool approx_equal(const PiecewiseLinearSet& other, double tol = kBreakpointTolerance) const {
    if (points_.size() != other.points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (std::abs(points_[i].x - other.points_[i].x) > tol) return false;
      if (std::abs(points_[i].mu - other.points_[i].mu) > tol) return false;
    }
    return true;
  }

 private:
  std::vector<Breakpoint> points_;
};

namespace detail {

/// Drops interior breakpoints that lie on the line through their neighbours
/// and merges x-coordinates closer than the breakpoint tolerance.
inline std::vector<Breakpoint> normalize(std::vector<Breakpoint> pts) {
  std::vector<Breakpoint> merged;
  merged.reserve(pts.size());
  for (const auto& p : pts) {
    if (!merged.empty() && p.x - merged.back().x <= kBreakpointTolerance) {
      merged.back().mu = std::max(merged.back().mu, p.mu);
      continue;
    }
    merged.push_back(p);
  }
  if (merged.size() <= 2) return merged;

  std::vector<Breakpoint> out;
  out.reserve(merged.size());
  out.push_back(merged.front());
  for (std::size_t i = 1; i + 1 < merged.size(); ++i) {
    const auto& a = out.back();
    const auto& b = merged[i];
    const auto& c = merged[i + 1];
    const double expected = a.mu + (c.mu - a.mu) * (b.x - a.x) / (c.x - a.x);
    if (std::abs(expected - b.mu) > 1e-12) out.push_back(b);
  }
  out.push_back(merged.back());
  return out;
}

/// Pointwise combination of two piecewise-linear functions with exact
/// insertion of every crossing, so min/max stay piecewise linear.
template <typename Pick>
std::vector<Breakpoint> combine(const PiecewiseLinearSet& a, const PiecewiseLinearSet& b, Pick pick) {
  std::vector<double> xs;
  xs.reserve(a.breakpoints().size() + b.breakpoints().size());
  for (const auto& p : a.breakpoints()) xs.push_back(p.x);
  for (const auto& p : b.breakpoints()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Breakpoint> out;
  out.reserve(xs.size() * 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double ya = a.membership(x);
    const double yb = b.membership(x);
    if (i > 0) {
      const double x0 = xs[i - 1];
      const double d0 = a.membership(x0) - b.membership(x0);
      const double d1 = ya - yb;
      if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
        const double t = d0 / (d0 - d1);
        const double xc = x0 + t * (x - x0);
        if (xc > x0 && xc < x) {
          out.push_back({xc, std::clamp(pick(a.membership(xc), b.membership(xc)), 0.0, 1.0)});
        }
      }
    }
    out.push_back({x, pick(ya, yb)});
  }
  return out;
}

}  // namespace detail

/// Pointwise min(mu, alpha). Throws std::invalid_argument for alpha outside [0,1].
inline PiecewiseLinearSet clip(const PiecewiseLinearSet& s, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("clip level must lie in [0,1]");
  }
  const PiecewiseLinearSet level({{s.lower(), alpha}, {s.upper(), alpha}});
  return PiecewiseLinearSet(
      detail::normalize(detail::combine(s, level, [](double u, double v) { return std::min(u, v); })));
}

/// Pointwise max of two sets.
inline PiecewiseLinearSet set_union(const PiecewiseLinearSet& a, const PiecewiseLinearSet& b) {
  return PiecewiseLinearSet(
      detail::normalize(detail::combine(a, b, [](double u, double v) { return std::max(u, v); })));
}

/// Area and first moment of the set over its breakpoint hull.
inline std::pair<double, double> area_and_moment(const PiecewiseLinearSet& s) {
  double area = 0.0;
  double moment = 0.0;
  const auto pts = s.breakpoints();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double x1 = pts[i - 1].x, y1 = pts[i - 1].mu;
    const double x2 = pts[i].x, y2 = pts[i].mu;
    const double w = x2 - x1;
    area += w * (y1 + y2) / 2.0;
    moment += w * (x1 * (2.0 * y1 + y2) + x2 * (y1 + 2.0 * y2)) / 6.0;
  }
  return {area, moment};
}

/// Center of gravity, integrated exactly segment by segment.
inline double centroid(const PiecewiseLinearSet& s) {
  const auto [area, moment] = area_and_moment(s);
  if (!(area > 0.0)) throw EmptySetError();
  return moment / area;
}

/// Trapezoid (a, b, c, d) with a <= b <= c <= d.
///
/// A degenerate left ramp (a == b) is a left shoulder: membership is 1 for
/// every x <= b. Likewise c == d is a right shoulder with membership 1 for
/// every x >= c.
struct Trapezoid {
  double a;
  double b;
  double c;
  double d;

  Trapezoid(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!(a <= b && b <= c && c <= d)) {
      throw std::invalid_argument("trapezoid requires a <= b <= c <= d");
    }
  }

  double membership(double x) const {
    if (x < b) {
      if (a == b) return 1.0;
      if (x <= a) return 0.0;
      return (x - a) / (b - a);
    }
    if (x <= c) return 1.0;
    if (c == d) return 1.0;
    if (x >= d) return 0.0;
    return (d - x) / (d - c);
  }

  /// Exact breakpoint representation restricted to [lo, hi].
  PiecewiseLinearSet to_set(double lo, double hi) const {
    std::vector<double> xs{lo, hi};
    for (double v : {a, b, c, d}) {
      if (v > lo && v < hi) xs.push_back(v);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Breakpoint> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back({x, membership(x)});
    return PiecewiseLinearSet(detail::normalize(std::move(pts)));
  }
};

inline double trapezoid_membership(double x, const Trapezoid& t) { return t.membership(x); }

}  // namespace spldst
