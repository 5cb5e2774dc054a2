#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gapbound/numerics.hpp"
#include "gapbound/profile.hpp"

namespace gapbound {

/// Axis-aligned box [0, a_1] x ... x [0, a_n]; sides are kept sorted in
/// descending order.
struct Box {
  Vec sides;
};

/// Closed disk of the given radius in the plane.
struct Disk {
  double radius = 1.0;
  Vec center{0.0, 0.0};
};

/// {(x, y) : s(x) <= y <= 1 + s(x), 0 <= x <= 1}. Every vertical fiber has
/// length one, so the area is exactly 1 and Z^2 is a spectrum.
struct GraphDomain {
  Profile profile = Sawtooth{};
};

struct DomainSpec;

/// The image t * D of a base domain.
struct ScaledDomain {
  std::shared_ptr<const DomainSpec> base;
  double t = 1.0;
};

/// Self-similar probability measure on [0, 1] carried by the base-4 digits {0, 2}.
struct CantorMeasure4 {};

struct DomainSpec {
  std::variant<Box, Disk, GraphDomain, ScaledDomain, CantorMeasure4> shape;
};

// Construction helpers. These normalize and validate.

inline DomainSpec make_box(Vec sides) {
  if (sides.empty()) throw Error("box: at least one side is required");
  for (double a : sides)
    if (!(a > 0.0) || !std::isfinite(a)) throw Error("box: sides must be positive and finite");
  std::sort(sides.begin(), sides.end(), std::greater<>());
  return {Box{std::move(sides)}};
}

inline DomainSpec make_disk(double radius, Vec center = {0.0, 0.0}) {
  if (!(radius > 0.0)) throw Error("disk: radius must be positive");
  if (center.size() != 2) throw Error("disk: center must be a planar point");
  return {Disk{radius, std::move(center)}};
}

inline DomainSpec make_graph(Profile profile) {
  validate(profile);
  return {GraphDomain{profile}};
}

inline DomainSpec make_sawtooth(int teeth, ToothShape shape = ToothShape::Ramp) {
  return make_graph(Sawtooth{teeth, 0.5, shape});
}

inline DomainSpec make_scaled(DomainSpec base, double t) {
  if (!(t > 0.0)) throw Error("scaled domain: t must be positive");
  if (std::holds_alternative<CantorMeasure4>(base.shape)) throw Error("scaled domain: base must be a Lebesgue domain");
  return {ScaledDomain{std::make_shared<const DomainSpec>(std::move(base)), t}};
}

inline DomainSpec make_cantor() { return {CantorMeasure4{}}; }

inline bool is_lebesgue(const DomainSpec& d) { return !std::holds_alternative<CantorMeasure4>(d.shape); }

inline void require_lebesgue(const DomainSpec& d) {
  if (!is_lebesgue(d)) throw Error("measure has zero Lebesgue volume; use total mass");
}

inline int dimension(const DomainSpec& d) {
  struct V {
    int operator()(const Box& b) const { return static_cast<int>(b.sides.size()); }
    int operator()(const Disk&) const { return 2; }
    int operator()(const GraphDomain&) const { return 2; }
    int operator()(const ScaledDomain& s) const { return dimension(*s.base); }
    int operator()(const CantorMeasure4&) const { return 1; }
  };
  return std::visit(V{}, d.shape);
}

inline std::string kind_name(const DomainSpec& d) {
  static const char* names[] = {"Box", "Disk", "GraphDomain", "ScaledDomain", "CantorMeasure4"};
  return names[d.shape.index()];
}

/// Lebesgue measure.
inline double volume(const DomainSpec& d) {
  struct V {
    double operator()(const Box& b) const {
      return std::accumulate(b.sides.begin(), b.sides.end(), 1.0, std::multiplies<>());
    }
    double operator()(const Disk& c) const { return kPi * c.radius * c.radius; }
    double operator()(const GraphDomain&) const { return 1.0; }
    double operator()(const ScaledDomain& s) const {
      return std::pow(s.t, dimension(*s.base)) * volume(*s.base);
    }
    double operator()(const CantorMeasure4&) const {
      throw Error("measure has zero Lebesgue volume; use total mass");
    }
  };
  return std::visit(V{}, d.shape);
}

/// Total mass: Lebesgue volume, or 1 for the Cantor probability measure.
inline double mass(const DomainSpec& d) { return is_lebesgue(d) ? volume(d) : 1.0; }

/// Closed-set membership (boundary points belong to D).
inline bool indicator(const DomainSpec& d, std::span<const double> x) {
  struct V {
    std::span<const double> x;
    bool operator()(const Box& b) const {
      if (x.size() != b.sides.size()) throw Error("indicator: dimension mismatch");
      for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < 0.0 || x[j] > b.sides[j]) return false;
      return true;
    }
    bool operator()(const Disk& c) const {
      if (x.size() != 2) throw Error("indicator: dimension mismatch");
      const double dx = x[0] - c.center[0], dy = x[1] - c.center[1];
      return dx * dx + dy * dy <= c.radius * c.radius;
    }
    bool operator()(const GraphDomain& g) const {
      if (x.size() != 2) throw Error("indicator: dimension mismatch");
      if (x[0] < 0.0 || x[0] > 1.0) return false;
      const double s = profile_value(g.profile, x[0]);
      return x[1] >= s && x[1] <= 1.0 + s;
    }
    bool operator()(const ScaledDomain& s) const {
      Vec y(x.begin(), x.end());
      for (double& v : y) v /= s.t;
      return indicator(*s.base, y);
    }
    bool operator()(const CantorMeasure4&) const {
      // support: base-4 expansions with digits in {0, 2}, checked to 40 digits
      if (x.size() != 1) throw Error("indicator: dimension mismatch");
      double v = x[0];
      if (v < 0.0 || v > 1.0) return false;
      for (int i = 0; i < 40; ++i) {
        v *= 4.0;
        const double digit = std::floor(v);
        if (v == 4.0) return true;  // 0.2222..._4 = 2/3 boundary
        if (digit == 1.0 || digit == 3.0) return false;
        v -= digit;
        if (v == 0.0) return true;
      }
      return true;
    }
  };
  return std::visit(V{x}, d.shape);
}

/// Surface measure of the boundary; exact for boxes, disks and sawtooth
/// polygons.
inline double surface_measure(const DomainSpec& d) {
  struct V {
    double operator()(const Box& b) const {
      double s = 0.0;
      for (std::size_t j = 0; j < b.sides.size(); ++j) {
        double face = 1.0;
        for (std::size_t i = 0; i < b.sides.size(); ++i)
          if (i != j) face *= b.sides[i];
        s += 2.0 * face;
      }
      return s;
    }
    double operator()(const Disk& c) const { return kTwoPi * c.radius; }
    double operator()(const GraphDomain& g) const {
      if (!is_piecewise_linear(g.profile)) throw Error("surface_measure: only defined for polygonal profiles");
      // two copies of the profile curve plus the two unit vertical sides
      return 2.0 * polyline_length(profile_polyline(g.profile)) + 2.0;
    }
    double operator()(const ScaledDomain& s) const {
      return std::pow(s.t, dimension(*s.base) - 1) * surface_measure(*s.base);
    }
    double operator()(const CantorMeasure4&) const { throw Error("surface_measure: not defined for a measure"); }
  };
  return std::visit(V{}, d.shape);
}

struct TubeVolume {
  double value = 0.0;
  bool saturated = false;  ///< eps reached the inradius; the inner tube fills D
};

/// |{x : dist(x, boundary of D) < eps}|, two-sided. Exact for boxes and
/// disks; column integration with one Richardson step for graph domains.
inline TubeVolume boundary_neighborhood_volume(const DomainSpec& d, double eps) {
  if (!(eps > 0.0)) throw Error("boundary_neighborhood_volume: eps must be positive");
  struct V {
    double eps;
    TubeVolume operator()(const Box& b) const {
      const auto n = b.sides.size();
      // elementary symmetric polynomials e_0..e_n of the sides
      std::vector<double> e(n + 1, 0.0);
      e[0] = 1.0;
      for (double a : b.sides)
        for (std::size_t k = n; k >= 1; --k) e[k] += e[k - 1] * a;
      double outer = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        outer += unit_ball_volume(static_cast<int>(n - j)) * e[j] * std::pow(eps, static_cast<double>(n - j));
      double core = 1.0;
      for (double a : b.sides) core *= std::max(0.0, a - 2.0 * eps);
      const double inner = e[n] - core;
      return {outer + inner, 2.0 * eps >= b.sides.back()};
    }
    TubeVolume operator()(const Disk& c) const {
      const double r = c.radius;
      const double outer = kPi * ((r + eps) * (r + eps) - r * r);
      const double inside = std::max(0.0, r - eps);
      const double inner = kPi * (r * r - inside * inside);
      return {outer + inner, eps >= r};
    }
    TubeVolume operator()(const GraphDomain& g) const {
      const ColumnTube ct = graph_tube_area(profile_polyline(g.profile), eps);
      return {ct.area, ct.saturated};
    }
    TubeVolume operator()(const ScaledDomain& s) const {
      TubeVolume base = boundary_neighborhood_volume(*s.base, eps / s.t);
      base.value *= std::pow(s.t, dimension(*s.base));
      return base;
    }
    TubeVolume operator()(const CantorMeasure4&) const {
      throw Error("measure has zero Lebesgue volume; use total mass");
    }
  };
  return std::visit(V{eps}, d.shape);
}

/// |D intersect (D + h)|.
inline double overlap_volume(const DomainSpec& d, std::span<const double> h);

/// |(D - h) intersect D intersect (D + h)|.
inline double triple_overlap_volume(const DomainSpec& d, std::span<const double> h);

namespace detail {

inline double lens_area(double r, double dist) {
  if (dist >= 2.0 * r) return 0.0;
  return 2.0 * r * r * std::acos(dist / (2.0 * r)) - 0.5 * dist * std::sqrt(4.0 * r * r - dist * dist);
}

inline void require_dim(const DomainSpec& d, std::span<const double> h) {
  if (static_cast<int>(h.size()) != dimension(d)) throw Error("shift vector dimension mismatch");
}

}  // namespace detail

inline double overlap_volume(const DomainSpec& d, std::span<const double> h) {
  require_lebesgue(d);
  detail::require_dim(d, h);
  struct V {
    std::span<const double> h;
    double operator()(const Box& b) const {
      double v = 1.0;
      for (std::size_t j = 0; j < h.size(); ++j) v *= std::max(0.0, b.sides[j] - std::abs(h[j]));
      return v;
    }
    double operator()(const Disk& c) const { return detail::lens_area(c.radius, norm2(h)); }
    double operator()(const GraphDomain& g) const {
      const Polyline pl = profile_polyline(g.profile);
      const std::array<ShiftedProfile, 2> copies{ShiftedProfile{0.0, 0.0}, ShiftedProfile{h[0], h[1]}};
      return graph_intersection_area(pl, copies);
    }
    double operator()(const ScaledDomain& s) const {
      Vec hs(h.begin(), h.end());
      for (double& v : hs) v /= s.t;
      return std::pow(s.t, dimension(*s.base)) * overlap_volume(*s.base, hs);
    }
    double operator()(const CantorMeasure4&) const { return 0.0; }
  };
  return std::visit(V{h}, d.shape);
}

inline double triple_overlap_volume(const DomainSpec& d, std::span<const double> h) {
  require_lebesgue(d);
  detail::require_dim(d, h);
  struct V {
    std::span<const double> h;
    double operator()(const Box& b) const {
      double v = 1.0;
      for (std::size_t j = 0; j < h.size(); ++j) v *= std::max(0.0, b.sides[j] - 2.0 * std::abs(h[j]));
      return v;
    }
    // a point within r of both c - h and c + h is within r of c (convexity)
    double operator()(const Disk& c) const { return detail::lens_area(c.radius, 2.0 * norm2(h)); }
    double operator()(const GraphDomain& g) const {
      const Polyline pl = profile_polyline(g.profile);
      const std::array<ShiftedProfile, 3> copies{ShiftedProfile{-h[0], -h[1]}, ShiftedProfile{0.0, 0.0},
                                                 ShiftedProfile{h[0], h[1]}};
      return graph_intersection_area(pl, copies);
    }
    double operator()(const ScaledDomain& s) const {
      Vec hs(h.begin(), h.end());
      for (double& v : hs) v /= s.t;
      return std::pow(s.t, dimension(*s.base)) * triple_overlap_volume(*s.base, hs);
    }
    double operator()(const CantorMeasure4&) const { return 0.0; }
  };
  return std::visit(V{h}, d.shape);
}

struct SymmetricDifference {
  double one_sided = 0.0;  ///< |D \ (D + h)|
  double two_sided = 0.0;  ///< |D symmetric-difference (D + h)|
  /// integral over D of |chi_D(x + h) - chi_D(x - h)|^2, i.e.
  /// |D intersect ((D - h) symmetric-difference (D + h))|
  double centered = 0.0;
};

inline SymmetricDifference symmetric_difference_volume(const DomainSpec& d, std::span<const double> h) {
  const double vol = volume(d);
  const double ov = overlap_volume(d, h);
  const double tri = triple_overlap_volume(d, h);
  SymmetricDifference r;
  r.one_sided = std::max(0.0, vol - ov);
  r.two_sided = 2.0 * r.one_sided;
  r.centered = std::max(0.0, 2.0 * (ov - tri));
  return r;
}

/// Euclidean diameter.
inline double diameter(const DomainSpec& d) {
  struct V {
    double operator()(const Box& b) const { return norm2(b.sides); }
    double operator()(const Disk& c) const { return 2.0 * c.radius; }
    double operator()(const GraphDomain& g) const {
      const Polyline pl = profile_polyline(g.profile);
      std::vector<std::array<double, 2>> pts;
      pts.reserve(2 * pl.size());
      for (std::size_t i = 0; i < pl.size(); ++i) {
        pts.push_back({pl.x[i], pl.y[i]});
        pts.push_back({pl.x[i], pl.y[i] + 1.0});
      }
      const auto hull = convex_hull(std::move(pts));
      double best = 0.0;
      for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
          best = std::max(best, std::hypot(hull[i][0] - hull[j][0], hull[i][1] - hull[j][1]));
      return best;
    }
    double operator()(const ScaledDomain& s) const { return s.t * diameter(*s.base); }
    double operator()(const CantorMeasure4&) const { return 2.0 / 3.0; }  // support spans [0, 2/3]
  };
  return std::visit(V{}, d.shape);
}

enum class DimensionSource { Analytic, Estimated };

struct BoundaryDimension {
  double alpha = 1.0;
  double content = 1.0;  ///< upper Minkowski content (two-sided tube convention)
  DimensionSource source = DimensionSource::Analytic;
  double residual_norm = 0.0;
  std::vector<double> eps;
  std::vector<double> tube;  ///< tube volumes at each eps
};

/// Geometric sequence 2^{-3} ... 2^{-12}.
inline std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int k = 3; k <= 12; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

namespace detail {

inline void check_eps_grid(std::span<const double> eps_grid) {
  if (eps_grid.size() < 4) throw Error("minkowski_estimate: need at least 4 eps values");
  for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
    if (!(eps_grid[i + 1] < eps_grid[i]) || !(eps_grid[i + 1] > 0.0))
      throw Error("minkowski_estimate: eps grid must be positive and strictly decreasing");
  if (eps_grid.front() / eps_grid.back() < 100.0) throw Error("minkowski_estimate: eps grid must span two decades");
}

inline std::vector<double> tube_samples(const DomainSpec& d, std::span<const double> eps_grid) {
  std::vector<double> v;
  v.reserve(eps_grid.size());
  for (double e : eps_grid) v.push_back(boundary_neighborhood_volume(d, e).value);
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] > v[i] * (1.0 + 1e-12) || !(v[i + 1] > 0.0)) throw Error("geometry evaluation inconsistent");
  return v;
}

}  // namespace detail

/// Least-squares fit of log(tube volume) against log(eps): the slope
/// estimates n - alpha and the intercept the log of the Minkowski content.
inline BoundaryDimension minkowski_estimate(const DomainSpec& d, std::span<const double> eps_grid) {
  require_lebesgue(d);
  detail::check_eps_grid(eps_grid);
  BoundaryDimension out;
  out.source = DimensionSource::Estimated;
  out.eps.assign(eps_grid.begin(), eps_grid.end());
  out.tube = detail::tube_samples(d, eps_grid);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    lx.push_back(std::log(eps_grid[i]));
    ly.push_back(std::log(out.tube[i]));
  }
  const LinearFit f = fit_line(lx, ly);
  out.alpha = dimension(d) - f.slope;
  out.content = std::exp(f.intercept);
  out.residual_norm = f.residual_norm;
  return out;
}

/// Content at a prescribed dimension: geometric mean of eps^{alpha - n} |tube(eps)|.
inline BoundaryDimension minkowski_content_at(const DomainSpec& d, double alpha, std::span<const double> eps_grid) {
  require_lebesgue(d);
  detail::check_eps_grid(eps_grid);
  const int n = dimension(d);
  if (!(alpha < n)) throw Error("minkowski_content_at: alpha must be below the ambient dimension");
  BoundaryDimension out;
  out.alpha = alpha;
  out.source = DimensionSource::Estimated;
  out.eps.assign(eps_grid.begin(), eps_grid.end());
  out.tube = detail::tube_samples(d, eps_grid);
  double acc = 0.0, acc2 = 0.0;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double r = std::log(out.tube[i]) - (n - alpha) * std::log(eps_grid[i]);
    acc += r;
    acc2 += r * r;
  }
  const double m = acc / static_cast<double>(eps_grid.size());
  out.content = std::exp(m);
  out.residual_norm = std::sqrt(std::max(0.0, acc2 - eps_grid.size() * m * m));
  return out;
}

/// Closed-form boundary dimension and tube content where they are known.
inline BoundaryDimension analytic_boundary_dimension(const DomainSpec& d) {
  struct V {
    BoundaryDimension operator()(const Box& b) const {
      BoundaryDimension r;
      r.alpha = static_cast<double>(b.sides.size()) - 1.0;
      r.content = 2.0 * surface_measure(DomainSpec{b});
      return r;
    }
    BoundaryDimension operator()(const Disk& c) const {
      BoundaryDimension r;
      r.alpha = 1.0;
      r.content = 4.0 * kPi * c.radius;
      return r;
    }
    BoundaryDimension operator()(const GraphDomain& g) const {
      BoundaryDimension r;
      if (is_piecewise_linear(g.profile)) {
        r.alpha = 1.0;
        r.content = 2.0 * surface_measure(DomainSpec{g});
      } else {
        r.alpha = 2.0 - std::get<Weierstrass>(g.profile).gamma;
        r.content = std::nan("");
      }
      return r;
    }
    BoundaryDimension operator()(const ScaledDomain& s) const {
      BoundaryDimension r = analytic_boundary_dimension(*s.base);
      r.content *= std::pow(s.t, r.alpha);
      return r;
    }
    BoundaryDimension operator()(const CantorMeasure4&) const {
      throw Error("measure has zero Lebesgue volume; use total mass");
    }
  };
  return std::visit(V{}, d.shape);
}

}  // namespace gapbound
