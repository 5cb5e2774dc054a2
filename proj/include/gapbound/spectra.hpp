#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gapbound/domains.hpp"
#include "gapbound/numerics.hpp"

namespace gapbound {

/// Closed cube with the given center and half-side (sidelength 2 * half_side).
struct Cube {
  Vec center;
  double half_side = 1.0;
};

/// prod_j steps_j Z.
struct DiagonalLattice {
  Vec steps;
};

/// offset + prod_j steps_j Z.
struct TranslatedLattice {
  DiagonalLattice base;
  Vec offset;
};

/// {sum_{j < max_digits} b_j 4^j : b_j in {0, 1}} on the line.
struct CantorDigits {
  int max_digits = 1;
};

/// A finite point list. When `coverage` is set, the list is declared
/// complete only inside that cube and queries reaching outside it fail.
struct Explicit {
  std::vector<Vec> points;
  std::size_t dim = 1;
  std::optional<Cube> coverage;
  Vec anchor;  ///< reference point that moves with the set under translation
};

struct SpectrumSpec {
  std::variant<DiagonalLattice, TranslatedLattice, CantorDigits, Explicit> set;
};

inline SpectrumSpec make_lattice(Vec steps) {
  if (steps.empty()) throw Error("lattice: at least one step is required");
  for (double s : steps)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error("lattice: steps must be positive and finite");
  return {DiagonalLattice{std::move(steps)}};
}

inline SpectrumSpec make_translated_lattice(Vec steps, Vec offset) {
  if (steps.size() != offset.size()) throw Error("translated lattice: offset dimension mismatch");
  auto base = std::get<DiagonalLattice>(make_lattice(std::move(steps)).set);
  return {TranslatedLattice{std::move(base), std::move(offset)}};
}

inline SpectrumSpec make_cantor_digits(int max_digits) {
  if (max_digits < 1 || max_digits > 30) throw Error("cantor digits: max_digits must lie in [1, 30]");
  return {CantorDigits{max_digits}};
}

inline SpectrumSpec make_explicit(std::vector<Vec> points, std::size_t dim, std::optional<Cube> coverage = {}) {
  for (const auto& p : points)
    if (p.size() != dim) throw Error("explicit spectrum: point dimension mismatch");
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    throw Error("explicit spectrum: duplicate points");
  return {Explicit{std::move(points), dim, std::move(coverage), Vec(dim, 0.0)}};
}

/// Dual lattice prod_j (1 / a_j) Z of a box.
inline SpectrumSpec dual_lattice(const Box& b) {
  Vec steps;
  for (double a : b.sides) steps.push_back(1.0 / a);
  return make_lattice(std::move(steps));
}

inline std::size_t dimension(const SpectrumSpec& s) {
  struct V {
    std::size_t operator()(const DiagonalLattice& l) const { return l.steps.size(); }
    std::size_t operator()(const TranslatedLattice& l) const { return l.base.steps.size(); }
    std::size_t operator()(const CantorDigits&) const { return 1; }
    std::size_t operator()(const Explicit& e) const { return e.dim; }
  };
  return std::visit(V{}, s.set);
}

inline std::string kind_name(const SpectrumSpec& s) {
  static const char* names[] = {"DiagonalLattice", "TranslatedLattice", "CantorDigits", "Explicit"};
  return names[s.set.index()];
}

inline bool is_lattice(const SpectrumSpec& s) {
  return std::holds_alternative<DiagonalLattice>(s.set) || std::holds_alternative<TranslatedLattice>(s.set);
}

/// Reference point carried along by translations (origin unless translated).
inline Vec anchor(const SpectrumSpec& s) {
  if (const auto* t = std::get_if<TranslatedLattice>(&s.set)) return t->offset;
  if (const auto* e = std::get_if<Explicit>(&s.set)) return e->anchor;
  return Vec(dimension(s), 0.0);
}

namespace detail {

inline std::vector<double> cantor_digit_points(int digits) {
  std::vector<double> pts;
  const std::uint64_t count = std::uint64_t{1} << digits;
  pts.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double v = 0.0, p = 1.0;
    for (int j = 0; j < digits; ++j) {
      if ((mask >> j) & 1U) v += p;
      p *= 4.0;
    }
    pts.push_back(v);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline double boundary_slack(double lo, double hi) {
  return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

struct AxisRange {
  double offset = 0.0;
  double step = 1.0;
  std::int64_t first = 0;
  std::int64_t last = -1;
};

inline AxisRange axis_range(double offset, double step, double lo, double hi) {
  const double slack = boundary_slack(lo, hi);
  AxisRange r{offset, step, 0, -1};
  r.first = static_cast<std::int64_t>(std::ceil((lo - slack - offset) / step));
  r.last = static_cast<std::int64_t>(std::floor((hi + slack - offset) / step));
  return r;
}

inline bool in_closed_cube(std::span<const double> p, const Cube& q) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double lo = q.center[j] - q.half_side, hi = q.center[j] + q.half_side;
    const double slack = boundary_slack(lo, hi);
    if (p[j] < lo - slack || p[j] > hi + slack) return false;
  }
  return true;
}

template <class F>
void for_each_lattice_point(std::span<const double> steps, std::span<const double> offset, const Cube& q, F&& f) {
  const std::size_t n = steps.size();
  std::vector<AxisRange> ax(n);
  for (std::size_t j = 0; j < n; ++j) {
    ax[j] = axis_range(offset[j], steps[j], q.center[j] - q.half_side, q.center[j] + q.half_side);
    if (ax[j].last < ax[j].first) return;
  }
  std::vector<std::int64_t> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = ax[j].first;
  Vec p(n);
  while (true) {
    for (std::size_t j = 0; j < n; ++j) p[j] = ax[j].offset + static_cast<double>(idx[j]) * ax[j].step;
    f(std::span<const double>(p));
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (idx[j] < ax[j].last) {
        ++idx[j];
        for (std::size_t k = j + 1; k < n; ++k) idx[k] = ax[k].first;
        break;
      }
      if (j == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace detail

/// Visits the points of the set lying in the closed cube, in lexicographic order.
template <class F>
void for_each_point(const SpectrumSpec& s, const Cube& q, F&& f) {
  if (q.center.size() != dimension(s)) throw Error("enumerate: cube dimension mismatch");
  if (!(q.half_side > 0.0)) throw Error("enumerate: half-side must be positive");
  struct V {
    const Cube& q;
    F& f;
    void operator()(const DiagonalLattice& l) const {
      const Vec zero(l.steps.size(), 0.0);
      detail::for_each_lattice_point(l.steps, zero, q, f);
    }
    void operator()(const TranslatedLattice& l) const { detail::for_each_lattice_point(l.base.steps, l.offset, q, f); }
    void operator()(const CantorDigits& c) const {
      for (double v : detail::cantor_digit_points(c.max_digits)) {
        const double p[1] = {v};
        if (detail::in_closed_cube(p, q)) f(std::span<const double>(p, 1));
      }
    }
    void operator()(const Explicit& e) const {
      if (e.coverage) {
        for (std::size_t j = 0; j < e.dim; ++j) {
          const double lo = q.center[j] - q.half_side, hi = q.center[j] + q.half_side;
          const double clo = e.coverage->center[j] - e.coverage->half_side;
          const double chi = e.coverage->center[j] + e.coverage->half_side;
          if (lo < clo || hi > chi) throw Error("enumerate: query extends beyond the stored points' coverage");
        }
      }
      for (const auto& p : e.points)
        if (detail::in_closed_cube(p, q)) f(std::span<const double>(p));
    }
  };
  std::visit(V{q, f}, s.set);
}

inline std::vector<Vec> enumerate(const SpectrumSpec& s, const Cube& q) {
  std::vector<Vec> out;
  for_each_point(s, q, [&](std::span<const double> p) { out.emplace_back(p.begin(), p.end()); });
  return out;
}

/// Number of points in the closed cube.
inline std::size_t count_in_cube(const SpectrumSpec& s, const Cube& q) {
  if (is_lattice(s)) {
    const auto* d = std::get_if<DiagonalLattice>(&s.set);
    const auto* t = std::get_if<TranslatedLattice>(&s.set);
    const Vec& steps = d ? d->steps : t->base.steps;
    const Vec offset = anchor(s);
    if (q.center.size() != steps.size()) throw Error("count: cube dimension mismatch");
    std::size_t count = 1;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const auto r = detail::axis_range(offset[j], steps[j], q.center[j] - q.half_side, q.center[j] + q.half_side);
      if (r.last < r.first) return 0;
      count *= static_cast<std::size_t>(r.last - r.first + 1);
    }
    return count;
  }
  std::size_t count = 0;
  for_each_point(s, q, [&](std::span<const double>) { ++count; });
  return count;
}

/// Lambda + mu.
inline SpectrumSpec translate(const SpectrumSpec& s, std::span<const double> mu) {
  if (mu.size() != dimension(s)) throw Error("translate: dimension mismatch");
  struct V {
    std::span<const double> mu;
    SpectrumSpec operator()(const DiagonalLattice& l) const {
      return {TranslatedLattice{l, Vec(mu.begin(), mu.end())}};
    }
    SpectrumSpec operator()(const TranslatedLattice& l) const {
      TranslatedLattice out = l;
      for (std::size_t j = 0; j < mu.size(); ++j) out.offset[j] += mu[j];
      return {out};
    }
    SpectrumSpec operator()(const CantorDigits& c) const {
      std::vector<Vec> pts;
      for (double v : detail::cantor_digit_points(c.max_digits)) pts.push_back({v + mu[0]});
      return {Explicit{std::move(pts), 1, std::nullopt, Vec{mu[0]}}};
    }
    SpectrumSpec operator()(const Explicit& e) const {
      Explicit out = e;
      for (auto& p : out.points)
        for (std::size_t j = 0; j < mu.size(); ++j) p[j] += mu[j];
      for (std::size_t j = 0; j < mu.size(); ++j) out.anchor[j] += mu[j];
      if (out.coverage)
        for (std::size_t j = 0; j < mu.size(); ++j) out.coverage->center[j] += mu[j];
      return {out};
    }
  };
  return std::visit(V{mu}, s.set);
}

struct BeurlingCounts {
  std::size_t plus = 0;   ///< max over the centers
  std::size_t minus = 0;  ///< min over the centers
  Vec argmax;
  Vec argmin;
};

/// Max and min of #(Lambda in Q_R(x)) over the supplied centers x.
inline BeurlingCounts beurling_counts(const SpectrumSpec& s, double R, std::span<const Vec> centers) {
  if (centers.empty()) throw Error("beurling_counts: need at least one center");
  BeurlingCounts out;
  out.minus = std::numeric_limits<std::size_t>::max();
  for (const auto& c : centers) {
    const std::size_t n = count_in_cube(s, Cube{c, R});
    if (n > out.plus || out.argmax.empty()) {
      out.plus = n;
      out.argmax = c;
    }
    if (n < out.minus) {
      out.minus = n;
      out.argmin = c;
    }
  }
  return out;
}

/// Uniform grid of centers covering a cube, `per_axis` points per axis.
inline std::vector<Vec> grid_centers(const Cube& region, int per_axis) {
  const std::size_t n = region.center.size();
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec c(n);
    for (std::size_t j = 0; j < n; ++j)
      c[j] = region.center[j] - region.half_side +
             (per_axis == 1 ? region.half_side : 2.0 * region.half_side * idx[j] / (per_axis - 1));
    out.push_back(std::move(c));
    std::size_t j = n;
    bool done = true;
    while (j > 0) {
      --j;
      if (idx[j] + 1 < per_axis) {
        ++idx[j];
        for (std::size_t k = j + 1; k < n; ++k) idx[k] = 0;
        done = false;
        break;
      }
    }
    if (done) break;
  }
  return out;
}

/// Largest cube (sup over closed empty cubes) found by the gap search.
struct EmptyCube {
  double side = 0.0;        ///< supremum of sidelengths 2R of closed cubes missing Lambda
  Vec witness_center;
  double resolution = 0.0;  ///< grid resolution of the final search pass (0 for analytic)
  bool certified = false;   ///< a cube of side (1 - 1e-9) * side at the witness is empty
  bool saturated = false;   ///< the answer was capped by the search region
  bool analytic = false;
};

namespace detail {

/// Sup-norm distance from c to the nearest point of the set, looking no
/// further than `reach`; returns reach when nothing is closer.
inline double nearest_sup_distance(const SpectrumSpec& s, std::span<const double> c, double reach) {
  double best = reach;
  for_each_point(s, Cube{Vec(c.begin(), c.end()), reach}, [&](std::span<const double> p) {
    double d = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) d = std::max(d, std::abs(p[j] - c[j]));
    best = std::min(best, d);
  });
  return best;
}

inline bool certify_empty(const SpectrumSpec& s, std::span<const double> c, double side) {
  if (side <= 0.0) return true;
  return count_in_cube(s, Cube{Vec(c.begin(), c.end()), 0.5 * side * (1.0 - 1e-9)}) == 0;
}

}  // namespace detail

/// Largest empty cube with center in `region`. Lattices are handled
/// analytically (the answer is the largest step); other sets by a grid of
/// candidate centers plus midpoints between neighbouring points, with the
/// grid refined by halving until the answer is stable to 1%.
inline EmptyCube max_empty_cube(const SpectrumSpec& s, const Cube& region, double resolution) {
  if (region.center.size() != dimension(s)) throw Error("max_empty_cube: region dimension mismatch");
  if (!(resolution > 0.0)) throw Error("max_empty_cube: resolution must be positive");
  EmptyCube out;
  const std::size_t n = dimension(s);

  if (is_lattice(s)) {
    const auto* d = std::get_if<DiagonalLattice>(&s.set);
    const auto* t = std::get_if<TranslatedLattice>(&s.set);
    const Vec& steps = d ? d->steps : t->base.steps;
    const Vec offset = anchor(s);
    const auto j = static_cast<std::size_t>(std::max_element(steps.begin(), steps.end()) - steps.begin());
    out.analytic = true;
    out.side = steps[j];
    out.witness_center = region.center;
    // midpoint between consecutive lattice planes nearest the region center
    const double cell = std::floor((region.center[j] - offset[j]) / steps[j]);
    out.witness_center[j] = offset[j] + (cell + 0.5) * steps[j];
    if (out.side > 2.0 * region.half_side) {
      out.side = 2.0 * region.half_side;
      out.saturated = true;
    }
    out.certified = detail::certify_empty(s, out.witness_center, out.side);
    return out;
  }

  // enumerate a margin around the region so cubes reaching outside it see
  // every point that could block them
  const double reach = 2.0 * region.half_side;
  const Cube wide{region.center, region.half_side + reach};
  const std::vector<Vec> pts = enumerate(s, wide);

  auto evaluate = [&](std::span<const double> c, EmptyCube& best) {
    double dist = reach;
    for (const auto& p : pts) {
      double dd = 0.0;
      for (std::size_t k = 0; k < n; ++k) dd = std::max(dd, std::abs(p[k] - c[k]));
      dist = std::min(dist, dd);
    }
    const double side = 2.0 * dist;
    if (side > best.side) {
      best.side = side;
      best.witness_center.assign(c.begin(), c.end());
      best.saturated = dist >= reach;
    }
  };

  EmptyCube best;
  best.witness_center = region.center;
  // midpoints between neighbouring points
  if (n == 1) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double m[1] = {0.5 * (pts[i][0] + pts[i + 1][0])};
      if (detail::in_closed_cube(m, region)) evaluate(m, best);
    }
  } else if (pts.size() <= 1500) {
    Vec m(n);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k) {
        for (std::size_t j = 0; j < n; ++j) m[j] = 0.5 * (pts[i][j] + pts[k][j]);
        if (detail::in_closed_cube(m, region)) evaluate(m, best);
      }
  }

  double res = resolution;
  double previous = -1.0;
  for (int pass = 0; pass < 8; ++pass) {
    const int per_axis = std::max(2, static_cast<int>(std::ceil(2.0 * region.half_side / res)) + 1);
    if (std::pow(static_cast<double>(per_axis), static_cast<double>(n)) > 4e6) break;
    for (const auto& c : grid_centers(region, per_axis)) evaluate(c, best);
    best.resolution = res;
    if (previous >= 0.0 && std::abs(best.side - previous) <= 0.01 * std::max(best.side, 1e-300)) break;
    previous = best.side;
    res *= 0.5;
  }
  if (pts.empty()) {
    best.side = 2.0 * reach;
    best.saturated = true;
  }
  best.certified = !best.saturated && detail::certify_empty(s, best.witness_center, best.side);
  return best;
}

/// Largest gap of CantorDigits{d} for d = 1..max_digits.
inline std::vector<double> cantor_gap_growth(int max_digits) {
  std::vector<double> gaps;
  for (int d = 1; d <= max_digits; ++d) {
    const double top = (std::pow(4.0, d) - 1.0) / 3.0;
    const Cube region{{0.5 * top}, 0.5 * top};
    gaps.push_back(max_empty_cube(make_cantor_digits(d), region, std::max(0.25, top / 64.0)).side);
  }
  return gaps;
}

}  // namespace gapbound
